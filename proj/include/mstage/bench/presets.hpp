#pragma once

#include <string>
#include <vector>

#include "mstage/core.hpp"

namespace mstage::bench {

enum class PuTraffic { Slow, Fast };
enum class SensingCase { Long, Short };  // T_s = 0.24 T / 0.1 T

struct DetectorSetup {
  double snr = 0.1;
  double bandwidth = 6e6;
};

/// Tabulated stage operating point with full-slot rates derived from the
/// detector at sense_time = T using the same threshold.
SensingParams sensing_case(SensingCase c, const DetectorSetup& d = {});
TrafficParams pu_traffic(PuTraffic t, double p_sa = 1.0, double p_sd = 0.0);

/// Solves W (1 - T_s/T) p_sa / (p_sa + p_sd) = generated for p_sd.
/// A negative result means the target is unreachable at this T_s.
double p_sd_for_generated(double generated, double p_sa, const SensingParams& s);

/// N = 6, B = 0, saturated SU.
ScenarioConfig single_grid(Algorithm a, PuTraffic t, SensingCase s, int S);
/// N = M = 3, B = 0, saturated SU.
ScenarioConfig parallel_grid(PuTraffic t, SensingCase s, int S);
/// S = 2, B = 0, slow PU, short T_s, saturated; a == Parallel selects M = N radios.
ScenarioConfig channel_sweep(Algorithm a, int N);
/// S = 2, N = 3, slow PU. Slow SU pairs with long T_s, fast SU with short T_s.
ScenarioConfig buffer_sweep(Algorithm a, bool fast_su, int B);

struct LabeledScenario {
  std::string label;
  ScenarioConfig config;
};

std::vector<LabeledScenario> single_grid_all();
std::vector<LabeledScenario> parallel_grid_all();
std::vector<LabeledScenario> channel_sweep_all();

std::string_view to_string(PuTraffic t);
std::string_view to_string(SensingCase s);

}  // namespace mstage::bench
