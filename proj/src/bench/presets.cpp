#include "mstage/bench/presets.hpp"

#include "mstage/detector.hpp"

namespace mstage::bench {

constexpr double kSlot = 1e-3;
constexpr double kRate = 1e6;
constexpr double kStageMiss = 0.1;
constexpr Algorithm kSingle[] = {Algorithm::P0Q0, Algorithm::P0Q1, Algorithm::P1Q0, Algorithm::P1Q1};

SensingParams sensing_case(SensingCase c, const DetectorSetup& d) {
  const double frac = c == SensingCase::Long ? 0.24 : 0.10;
  const double p_fs = c == SensingCase::Long ? 0.10 : 0.36;
  const RocPoint full = full_slot_rates(d.snr, d.bandwidth, frac * kSlot, kSlot, kStageMiss);
  return SensingParams(p_fs, kStageMiss, full.p_f, full.p_m, kSlot, frac * kSlot, kRate);
}

TrafficParams pu_traffic(PuTraffic t, double p_sa, double p_sd) {
  return t == PuTraffic::Slow ? TrafficParams(0.01, 0.01, p_sa, p_sd)
                              : TrafficParams(0.5, 0.1, p_sa, p_sd);
}

double p_sd_for_generated(double generated, double p_sa, const SensingParams& s) {
  return p_sa * (s.W * s.transmit_fraction() / generated - 1.0);
}

ScenarioConfig single_grid(Algorithm a, PuTraffic t, SensingCase s, int S) {
  ScenarioConfig c;
  c.traffic = pu_traffic(t);
  c.sensing = sensing_case(s);
  c.S = S;
  c.N = 6;
  c.M = 1;
  c.B = 0;
  c.algorithm = a;
  c.architecture = Architecture::Single;
  return c;
}

ScenarioConfig parallel_grid(PuTraffic t, SensingCase s, int S) {
  ScenarioConfig c;
  c.traffic = pu_traffic(t);
  c.sensing = sensing_case(s);
  c.S = S;
  c.N = 3;
  c.M = 3;
  c.B = 0;
  c.algorithm = Algorithm::Parallel;
  c.architecture = Architecture::Parallel;
  return c;
}

ScenarioConfig channel_sweep(Algorithm a, int N) {
  ScenarioConfig c;
  c.traffic = pu_traffic(PuTraffic::Slow);
  c.sensing = sensing_case(SensingCase::Short);
  c.S = 2;
  c.N = N;
  c.B = 0;
  c.algorithm = a;
  if (a == Algorithm::Parallel) {
    c.M = N;
    c.architecture = Architecture::Parallel;
  } else {
    c.M = 1;
    c.architecture = Architecture::Single;
  }
  return c;
}

ScenarioConfig buffer_sweep(Algorithm a, bool fast_su, int B) {
  ScenarioConfig c;
  c.traffic = fast_su ? TrafficParams(0.01, 0.01, 0.5, 0.1) : TrafficParams(0.01, 0.01, 0.01, 0.01);
  c.sensing = sensing_case(fast_su ? SensingCase::Short : SensingCase::Long);
  c.S = 2;
  c.N = 3;
  c.M = 1;
  c.B = B;
  c.algorithm = a;
  return c;
}

std::vector<LabeledScenario> single_grid_all() {
  std::vector<LabeledScenario> out;
  for (PuTraffic t : {PuTraffic::Slow, PuTraffic::Fast})
    for (SensingCase s : {SensingCase::Long, SensingCase::Short})
      for (Algorithm a : kSingle)
        for (int S = 1; S <= 4; ++S)
          out.push_back({std::string(to_string(a)) + " " + std::string(to_string(t)) + "-PU " +
                             std::string(to_string(s)) + "-Ts S=" + std::to_string(S),
                         single_grid(a, t, s, S)});
  return out;
}

std::vector<LabeledScenario> parallel_grid_all() {
  std::vector<LabeledScenario> out;
  for (PuTraffic t : {PuTraffic::Slow, PuTraffic::Fast})
    for (SensingCase s : {SensingCase::Long, SensingCase::Short})
      for (int S = 1; S <= 4; ++S)
        out.push_back({"PARALLEL " + std::string(to_string(t)) + "-PU " + std::string(to_string(s)) +
                           "-Ts S=" + std::to_string(S),
                       parallel_grid(t, s, S)});
  return out;
}

std::vector<LabeledScenario> channel_sweep_all() {
  std::vector<LabeledScenario> out;
  for (Algorithm a : {Algorithm::P0Q0, Algorithm::P0Q1, Algorithm::P1Q0, Algorithm::P1Q1,
                      Algorithm::Parallel})
    for (int N = 2; N <= 5; ++N)
      out.push_back({std::string(to_string(a)) + " N=" + std::to_string(N), channel_sweep(a, N)});
  return out;
}

std::string_view to_string(PuTraffic t) { return t == PuTraffic::Slow ? "slow" : "fast"; }
std::string_view to_string(SensingCase s) { return s == SensingCase::Long ? "long" : "short"; }

}  // namespace mstage::bench
