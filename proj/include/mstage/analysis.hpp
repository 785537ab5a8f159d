#pragma once

#include <cstddef>
#include <string>

#include "mstage/core.hpp"
#include "mstage/single_radio.hpp"
#include "mstage/stationary.hpp"

namespace mstage {

enum class Provenance { Analytic, Simulated };

/// Throughput, collisions and frame delivery for one scenario.
struct MetricsReport {
  ScenarioConfig scenario;
  Provenance source = Provenance::Analytic;
  double R = 0.0;              ///< bit/s
  double G = 0.0;              ///< collisions per slot
  double delivery_rate = 0.0;  ///< delivered frames / generated frames
  double R_se = 0.0;           ///< standard errors, zero for analytic results
  double G_se = 0.0;
  double delivery_se = 0.0;
  std::size_t state_count = 0;
  double residual = 0.0;       ///< stationary residual
  double max_row_error = 0.0;  ///< max |row sum - 1| of the kernel
  std::string solver;

  /// R normalized by the offered capacity: W for one radio, N W for N radios.
  double normalized_throughput() const;
};

struct AnalysisOptions {
  EnumerationOptions enumeration;
  SolveOptions solve;
};

/// Builds the exact chain for the scenario's architecture and evaluates it.
MetricsReport analyze(const ScenarioConfig& cfg, const AnalysisOptions& opt = {});

}  // namespace mstage
