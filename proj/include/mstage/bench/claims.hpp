#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mstage/analysis.hpp"

namespace mstage::bench {

struct ClaimResult {
  int id = 0;
  std::string name;
  std::string computed;
  std::string expected;
  bool pass = false;
  std::string note;
};

struct ClaimOptions {
  bool simulate = true;  // the Monte Carlo agreement claim is skipped (and fails) without it
  std::int64_t slots = 1'000'000;
  std::int64_t warmup = 10'000;
  int replications = 10;
  std::uint64_t seed = 20100;
  std::vector<int> only;  // claim ids to run; empty runs all
  std::function<void(const ClaimResult&)> on_result;
  std::function<void(const std::string&)> on_progress;
};

/// Evaluates the quantitative claims in order and reports each one.
std::vector<ClaimResult> reproduce_claims(const ClaimOptions& opt = {});

}  // namespace mstage::bench
