#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mstage/bench/presets.hpp"
#include "mstage/core.hpp"

namespace mstage::bench {

struct SimSettings {
  bool enabled = true;
  std::int64_t slots = 1'000'000;
  std::int64_t warmup = 10'000;
  std::uint64_t seed = 1;
  int replications = 10;
};

struct SweepAxis {
  std::string name;  // S, T_s, B, N or algorithm
  std::vector<std::string> values;
};

enum class Recalibrate { Off, Stage, Full };

struct DerivedRules {
  /// Stage: p_fs from the detector at T_s holding p_ms. Full: also p_ft, p_mt at T.
  Recalibrate recalibrate = Recalibrate::Off;
  /// Target W (1 - T_s/T) p_sa / (p_sa + p_sd) in bit/s, met by solving for p_sd.
  std::optional<double> generated_throughput;
};

/// Cartesian product of the axes, first axis outermost.
struct SweepSpec {
  ScenarioConfig base;
  std::vector<SweepAxis> axes;
  DerivedRules rules;
  DetectorSetup detector;

  void validate() const;
};

struct RunConfig {
  SweepSpec sweep;  // no axes: a single scenario
  SimSettings sim;
  double qos_max_unsuccessful = 0.1;
};

/// Flat `key = value` text with an optional [sweep] section.
/// Throws UsageError carrying the line number for anything unparseable.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

}  // namespace mstage::bench
