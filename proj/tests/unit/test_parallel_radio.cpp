#include <doctest.h>

#include <random>

#include "mstage/analysis.hpp"
#include "mstage/errors.hpp"
#include "mstage/parallel_radio.hpp"
#include "mstage/stationary.hpp"

using namespace mstage;

namespace {

const SensingParams kSense(0.12, 0.08, 0.04, 0.03, 1e-3, 0.15e-3, 1e6);

ScenarioConfig par(int M, int S, int B, TrafficParams t, SensingParams s = kSense) {
  ScenarioConfig c;
  c.traffic = t;
  c.sensing = s;
  c.S = S;
  c.N = M;
  c.M = M;
  c.B = B;
  c.algorithm = Algorithm::Parallel;
  c.architecture = Architecture::Parallel;
  return c;
}

ParallelRadioState ps(int M, std::uint32_t I, std::uint32_t F, std::initializer_list<int> J, int b) {
  ParallelRadioState s;
  s.I = ChannelOccupancy(M, I);
  s.F = F;
  int m = 1;
  for (int j : J) s.set_mode(m++, j);
  s.b = b;
  return s;
}

}  // namespace

TEST_CASE("frame accounting example") {
  const int S = 3;
  const ScenarioConfig c = par(3, S, 2, TrafficParams(0.1, 0.1, 0.5, 0.5));
  const auto s = ps(3, 0, 0b101, {2, S + 1, 0}, 1);
  const FrameAccounting a = frame_accounting(s, 1, c);
  CHECK(a.F_N == 2);
  CHECK(a.F_T == 3);
  CHECK(a.M_F == 2);
  CHECK(a.M_A == 2);
  CHECK(a.sets.active == std::vector<int>{1, 3});
  CHECK(a.sets.idle.empty());
  CHECK(a.sets.quiet == std::vector<int>{2});
  CHECK(a.b_next == 1);
}

TEST_CASE("frame accounting without traffic and with overflow") {
  const int S = 2;
  ScenarioConfig c = par(3, S, 0, TrafficParams(0.1, 0.1, 0.5, 0.5));
  const FrameAccounting none = frame_accounting(ps(3, 0, 0, {0, S + 1, 0}, 0), 0, c);
  CHECK(none.M_A == 0);
  CHECK(none.sets.idle == std::vector<int>{1, 3});
  CHECK(none.b_next == 0);

  const FrameAccounting over = frame_accounting(ps(3, 0, 0b111, {S + 1, S + 1, 1}, 0), 0, c);
  CHECK(over.F_T == 3);
  CHECK(over.M_A == 1);
  CHECK(over.b_next == 0);
}

TEST_CASE("chained frame process") {
  const TrafficParams t(0.0, 0.0, 0.1, 0.3);
  CHECK(su_traffic_prob_parallel(0b10, 0b10, 2, t) == doctest::Approx(0.03));
  const TrafficParams sat(0.0, 0.0, 1.0, 0.0);
  CHECK(su_traffic_prob_parallel(0b100, 0b111, 3, sat) == 1.0);
  for (int M = 1; M <= 4; ++M) {
    for (std::uint32_t F1 = 0; F1 < (1U << M); ++F1) {
      double total = 0.0;
      for (std::uint32_t F2 = 0; F2 < (1U << M); ++F2) total += su_traffic_prob_parallel(F1, F2, M, t);
      CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
    }
  }
  CHECK_THROWS_AS(su_traffic_prob_parallel(0b100, 0, 2, t), InputShapeError);
}

TEST_CASE("per-radio sensing factors") {
  const SensingParams& p = kSense;
  const int S = 3;
  CHECK(radio_sensing_factor(RadioRole::Active, 2, 0, false, p, S) == 1.0);
  CHECK(radio_sensing_factor(RadioRole::Active, 2, 3, false, p, S) == p.p_fs);
  CHECK(radio_sensing_factor(RadioRole::Active, 2, 1, true, p, S) == doctest::Approx(p.p_ms));
  CHECK(radio_sensing_factor(RadioRole::Active, S, 0, false, p, S) == doctest::Approx(1.0 - p.p_fs));
  CHECK(radio_sensing_factor(RadioRole::Active, S, S + 1, true, p, S) == doctest::Approx(1.0 - p.p_ms));
  CHECK(radio_sensing_factor(RadioRole::Quiet, S + 1, S + 1, true, p, S) == doctest::Approx(1.0 - p.p_mt));
  CHECK(radio_sensing_factor(RadioRole::Quiet, S + 1, 0, false, p, S) == doctest::Approx(1.0 - p.p_ft));
  CHECK(radio_sensing_factor(RadioRole::Idle, 0, 2, false, p, S) == 0.0);
  CHECK(radio_sensing_factor(RadioRole::Idle, 0, 1, true, p, S) == 1.0);
}

TEST_CASE("feasibility follows the accounting of the target state") {
  const int S = 2;
  const ScenarioConfig c = par(3, S, 2, TrafficParams(0.1, 0.1, 0.5, 0.5));
  const auto s1 = ps(3, 0, 0b011, {1, 0, S + 1}, 1);
  // F_T = 1 + 2 = 3, two free radios -> both active, one frame buffered.
  CHECK(feasibility_parallel(s1, ps(3, 0, 0b011, {1, 2, S + 1}, 1), c) == 1);
  CHECK(feasibility_parallel(s1, ps(3, 0, 0b011, {1, 2, S + 1}, 2), c) == 0);
  // One frame, two free radios: the lower index must be the active one.
  const auto s1b = ps(3, 0, 0, {1, 0, S + 1}, 0);
  CHECK(feasibility_parallel(s1b, ps(3, 0, 0b001, {1, 0, S + 1}, 0), c) == 1);
  CHECK(feasibility_parallel(s1b, ps(3, 0, 0b001, {0, 1, S + 1}, 0), c) == 0);
}

TEST_CASE("every enumerated state is self-consistent") {
  for (int S : {1, 2}) {
    for (int B : {0, 2}) {
      const ScenarioConfig c = par(3, S, B, TrafficParams(0.2, 0.3, 0.4, 0.3));
      const ParallelRadioModel m = enumerate_states_parallel(c);
      for (const auto& s : m.states) {
        const RadioSets sets = radio_sets(s, S);
        CHECK(sets.active.size() + sets.idle.size() + sets.quiet.size() == 3);
        if (!sets.active.empty() && !sets.idle.empty()) CHECK(sets.active.back() < sets.idle.front());
        CHECK(s.b <= B);
        if (!sets.idle.empty()) CHECK(s.b == 0);
      }
    }
  }
}

TEST_CASE("one radio: parallel quiet mode waits for a vacancy, P0Q1 does not") {
  const SensingParams p = kSense;
  ScenarioConfig pc = par(1, 1, 0, TrafficParams(0.3, 0.2, 1.0, 0.0), p);
  const ParallelRadioModel pm = build_kernel_parallel(pc);
  const auto quiet = ps(1, 1, 1, {2}, 0);
  REQUIRE(pm.index_of(quiet).has_value());
  // PU stays: quiet persists with 1 - p_mt.
  CHECK(pm.probability(quiet, ps(1, 1, 1, {2}, 0)) == doctest::Approx((1.0 - 0.2) * (1.0 - p.p_mt)));

  ScenarioConfig sc = pc;
  sc.algorithm = Algorithm::P0Q1;
  sc.architecture = Architecture::Single;
  const SingleRadioModel sm = build_kernel(sc);
  const SingleRadioState q{ChannelOccupancy(1, 1), 1, 2, 0, 1};
  REQUIRE(sm.index_of(q).has_value());
  // Single radio leaves the quiet mode every time; with one channel it lands on stage 1.
  CHECK(sm.probability(q, SingleRadioState{ChannelOccupancy(1, 1), 1, 1, 0, 1}) == doctest::Approx(0.8));
  CHECK(sm.probability(q, q) == 0.0);
}

// Memoryless PU: a radio is quiet next slot iff its channel is busy now, so it
// is active half the time and succeeds in half of those slots.
TEST_CASE("decoupled radios reproduce the per-channel closed form") {
  for (int M = 1; M <= 3; ++M) {
    const ScenarioConfig c = par(M, 1, 0, TrafficParams(0.5, 0.5, 1.0, 0.0),
                                 SensingParams(0.0, 0.0, 0.0, 0.0, 1e-3, 0.0, 1e6));
    const MetricsReport r = analyze(c);
    CHECK(r.R == doctest::Approx(0.25 * M * c.sensing.W).epsilon(1e-12));
    CHECK(r.G == doctest::Approx(0.25 * M).epsilon(1e-12));
  }
}

TEST_CASE("no SU traffic: nothing sent, nothing collides") {
  const MetricsReport r = analyze(par(3, 2, 1, TrafficParams(0.2, 0.2, 0.0, 0.5)));
  CHECK(r.R == 0.0);
  CHECK(r.G == 0.0);
}

TEST_CASE("random parallel configs: stochastic kernels and 0 <= G <= N") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.02, 0.98);
  for (int trial = 0; trial < 12; ++trial) {
    const int M = 1 + trial % 3;
    const int S = 1 + trial % 2;
    const int B = trial % 3;
    const SensingParams s(u(rng) / 2, u(rng) / 2, u(rng) / 2, u(rng) / 2, 1e-3, 0.1e-3, 1e6);
    const ScenarioConfig c = par(M, S, B, TrafficParams(u(rng), u(rng), u(rng), u(rng)), s);
    CAPTURE(trial);
    CHECK(verify_stochastic(build_kernel_parallel(c)).ok());
    const MetricsReport r = analyze(c);
    CHECK(r.G >= 0.0);
    CHECK(r.G <= M);
    CHECK(r.R <= throughput_upper_bound(c) + 1e-9);
    CHECK(r.residual <= 1e-10);
  }
}

TEST_CASE("parallel model rejects single-radio scenarios") {
  ScenarioConfig c = par(2, 1, 0, TrafficParams(0.1, 0.1, 0.5, 0.5));
  c.architecture = Architecture::Single;
  c.algorithm = Algorithm::P0Q1;
  c.M = 1;
  CHECK_THROWS_AS(build_kernel_parallel(c), ConfigError);
}
