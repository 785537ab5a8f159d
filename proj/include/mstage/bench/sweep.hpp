#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mstage/analysis.hpp"
#include "mstage/bench/config_file.hpp"
#include "mstage/simulator.hpp"

namespace mstage::bench {

struct SweepPoint {
  ScenarioConfig scenario;
  bool feasible = true;
  std::string note;  // why an infeasible point was skipped
};

/// Applies axis values and derived rules. Throws ConfigError (naming the
/// violated rule) for any point whose scenario is invalid; points whose
/// generated-throughput target cannot be met are returned flagged instead.
std::vector<SweepPoint> expand(const SweepSpec& spec);

struct ResultRow {
  ScenarioConfig scenario;
  std::string status = "ok";  // ok | infeasible | error
  std::string note;
  std::optional<MetricsReport> analytic;
  std::optional<SimMetrics> sim;
  std::optional<Comparison> comparison;
  double upper_bound = 0.0;
  bool bound_ok = true;
  bool qos_ok = true;  // unsuccessful frame delivery rate within the QoS limit

  /// R / (N_eff W) and G / N_eff, N_eff = N for parallel radios and 1 otherwise.
  double normalized_R() const;
  double normalized_G() const;
  /// Invariants hold and, if simulated, the comparison passed.
  bool ok() const;
};

struct SweepOptions {
  bool analytic = true;
  bool simulate = true;
  SimSettings sim;
  double qos_max_unsuccessful = 0.1;
  AnalysisOptions analysis;
};

/// Rows come back in sweep order.
std::vector<ResultRow> run_sweep(const SweepSpec& spec, const SweepOptions& opt);

/// Keeps rows whose unsuccessful delivery rate is at most the limit.
std::vector<ResultRow> qos_filter(const std::vector<ResultRow>& rows, double max_unsuccessful);

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);

}  // namespace mstage::bench
