#pragma once

#include <cstdint>
#include <vector>

#include "mstage/analysis.hpp"
#include "mstage/core.hpp"

namespace mstage {

struct SimConfig {
  ScenarioConfig scenario;
  std::int64_t slots = 1'000'000;  ///< per replication, warmup included
  std::int64_t warmup = 10'000;    ///< leading slots excluded from every tally
  std::uint64_t seed = 1;
  int replications = 10;
  int threads = 0;  ///< 0: one per hardware thread

  void validate() const;
};

/// Raw tallies of one replication over its measured slots.
struct SimCounts {
  std::int64_t slots = 0;
  std::int64_t generated = 0;
  std::int64_t delivered = 0;
  std::int64_t collided = 0;
  std::int64_t dropped = 0;
  std::int64_t buffer_start = 0;  ///< buffer occupancy just before the first measured slot
  std::int64_t buffer_end = 0;
  std::int64_t busy_channel_slots = 0;  ///< sum over slots of busy PU channels

  SimCounts& operator+=(const SimCounts& o);
  /// generated == delivered + collided + dropped + buffer growth
  bool conserved() const;
};

struct SimMetrics {
  ScenarioConfig scenario;
  int replications = 0;
  double R = 0.0, R_se = 0.0;
  double G = 0.0, G_se = 0.0;
  double delivery_rate = 0.0, delivery_se = 0.0;
  double occupancy = 0.0, occupancy_se = 0.0;  ///< per-channel PU busy fraction
  SimCounts totals;                             ///< summed over replications
  std::vector<SimCounts> per_replication;

  MetricsReport report() const;
};

/// Runs independent replications; results depend only on (config, seed),
/// never on the thread count.
SimMetrics simulate(const SimConfig& cfg);

/// One replication, exposed for tests.
SimCounts simulate_replication(const SimConfig& cfg, int replication);

struct MetricComparison {
  double analytic = 0.0;
  double simulated = 0.0;
  double se = 0.0;
  double z = 0.0;           ///< |difference| / se
  double rel_error = 0.0;   ///< |difference| / |analytic|
  bool within = false;      ///< |difference| <= sigmas * se
  double margin = 0.0;      ///< sigmas - z
};

struct Comparison {
  MetricComparison R, G, delivery;
  bool pass = false;  ///< R and G both within tolerance
};

/// Throws ComparisonError if the two results describe different scenarios.
Comparison compare(const MetricsReport& analytic, const SimMetrics& sim, double sigmas = 3.0);

}  // namespace mstage
