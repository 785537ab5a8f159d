#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "mstage/analysis.hpp"
#include "mstage/errors.hpp"
#include "mstage/single_radio.hpp"
#include "mstage/stationary.hpp"

using namespace mstage;

namespace {

constexpr Algorithm kAll[] = {Algorithm::P0Q0, Algorithm::P0Q1, Algorithm::P1Q0, Algorithm::P1Q1};

const SensingParams kSense(0.11, 0.07, 0.03, 0.02, 1e-3, 0.2e-3, 1e6);

SingleRadioState st(int n, std::uint32_t I, int f, int j, int b, int c) {
  return {ChannelOccupancy(n, I), f, j, b, c};
}

ScenarioConfig cfg(Algorithm a, int S, int N, int B, TrafficParams t, SensingParams s = kSense) {
  ScenarioConfig c;
  c.traffic = t;
  c.sensing = s;
  c.S = S;
  c.N = N;
  c.B = B;
  c.algorithm = a;
  return c;
}

// One channel, one stage, perfect detector, saturated SU, PU flips half the time.
ScenarioConfig coin_flip_channel() {
  return cfg(Algorithm::P0Q0, 1, 1, 0, TrafficParams(0.5, 0.5, 1.0, 0.0),
             SensingParams(0.0, 0.0, 0.0, 0.0, 1e-3, 0.0, 1e6));
}

}  // namespace

TEST_CASE("mode sets per algorithm") {
  const int S = 3;
  CHECK(mode_sets(Algorithm::P0Q1, S).gamma == std::vector<int>{0, 1, 2, 3, 4});
  CHECK(mode_sets(Algorithm::P0Q0, S).gamma == std::vector<int>{0, 1, 2, 3});
  CHECK(mode_sets(Algorithm::P1Q1, S).gamma == std::vector<int>{0, 1, 2, 3, 4, 5});
  CHECK(mode_sets(Algorithm::P1Q0, S).gamma == std::vector<int>{0, 1, 2, 3, 5});
  CHECK(mode_sets(Algorithm::P1Q0, S).gamma_a == std::vector<int>{1, 2, 3, 5});
  CHECK(*mode_sets(Algorithm::P1Q1, S).quiet == 4);
  CHECK(*mode_sets(Algorithm::P1Q1, S).presensing == 5);
  CHECK_FALSE(mode_sets(Algorithm::P0Q0, S).quiet.has_value());
  for (Algorithm a : kAll) CHECK(mode_sets(a, S).gamma_s == std::vector<int>{1, 2, 3});
  CHECK_THROWS_AS(mode_sets(Algorithm::Parallel, S), ConfigError);
}

TEST_CASE("next channel wraps cyclically") {
  CHECK(next_channel(1, 6) == 2);
  CHECK(next_channel(6, 6) == 1);
  CHECK(next_channel(1, 1) == 1);
}

TEST_CASE("sensing outcome examples") {
  const SensingParams& p = kSense;
  const int S = 3;
  CHECK(sensing_outcome_prob(Algorithm::P0Q1, 1, 2, false, true, p, S) == p.p_fs);
  CHECK(sensing_outcome_prob(Algorithm::P0Q1, 0, 1, false, true, p, S) == 1.0);
  CHECK(sensing_outcome_prob(Algorithm::P0Q1, 0, 1, true, true, p, S) == 1.0);
  CHECK(sensing_outcome_prob(Algorithm::P0Q0, S, 1, true, false, p, S) == doctest::Approx(1.0 - p.p_ms));
  CHECK(sensing_outcome_prob(Algorithm::P0Q1, S + 1, 1, true, true, p, S) == doctest::Approx(p.p_mt));
  CHECK(sensing_outcome_prob(Algorithm::P0Q1, S + 1, 1, false, false, p, S) == p.p_ft);
  CHECK(sensing_outcome_prob(Algorithm::P1Q1, S + 2, S + 2, true, false, p, S) == doctest::Approx(1.0 - p.p_mt));
  CHECK(sensing_outcome_prob(Algorithm::P1Q0, S, S + 2, false, false, p, S) == p.p_fs);
  CHECK(sensing_outcome_prob(Algorithm::P0Q0, 1, 3, false, true, p, S) == 0.0);
}

TEST_CASE("sensing outcome rejects modes outside the algorithm") {
  CHECK_THROWS_AS(sensing_outcome_prob(Algorithm::P0Q0, 1, 4, false, true, kSense, 3), InvalidModeError);
  CHECK_THROWS_AS(sensing_outcome_prob(Algorithm::P1Q0, 4, 1, false, true, kSense, 3), InvalidModeError);
  CHECK_THROWS_AS(sensing_outcome_prob(Algorithm::P0Q1, -1, 1, false, true, kSense, 3), InvalidModeError);
}

TEST_CASE("sensing outcomes out of an active mode are exhaustive") {
  for (Algorithm a : kAll) {
    for (int S = 1; S <= 4; ++S) {
      const ModeSets m = mode_sets(a, S);
      for (int j1 : m.gamma_a) {
        for (bool pu : {false, true}) {
          double total = 0.0;
          for (int j2 : m.gamma_a)
            for (bool same : {true, false}) total += sensing_outcome_prob(a, j1, j2, pu, same, kSense, S);
          CAPTURE(to_string(a));
          CAPTURE(S);
          CAPTURE(j1);
          CHECK(total == doctest::Approx(1.0).epsilon(1e-15));
        }
      }
    }
  }
}

TEST_CASE("feasibility examples") {
  const int S = 2, N = 3;
  // P0Q0 switch after the last stage keeps transmitting on the next channel.
  CHECK(feasibility(Algorithm::P0Q0, st(N, 0, 1, S, 0, 3), st(N, 0, 1, 1, 0, 1), S, 0, N) == 1);
  CHECK(feasibility(Algorithm::P0Q0, st(N, 0, 0, 0, 0, 1), st(N, 0, 1, 2, 0, 1), S, 0, N) == 0);
  // Full buffer: the new frame is discarded on entry to the quiet mode.
  CHECK(feasibility(Algorithm::P0Q1, st(N, 0, 1, S, 2, 1), st(N, 0, 1, S + 1, 2, 1), S, 2, N) == 1);
  CHECK(feasibility(Algorithm::P0Q1, st(N, 0, 1, S, 1, 1), st(N, 0, 1, S + 1, 2, 1), S, 2, N) == 1);
  CHECK(feasibility(Algorithm::P0Q1, st(N, 0, 1, S, 1, 1), st(N, 0, 1, S + 1, 1, 1), S, 2, N) == 0);
  // Idle SU with a new frame enters pre-sensing and buffers it.
  CHECK(feasibility(Algorithm::P1Q1, st(N, 0, 0, 0, 0, 2), st(N, 0, 1, S + 2, 1, 2), S, 1, N) == 1);
  CHECK(feasibility(Algorithm::P1Q1, st(N, 0, 0, 0, 0, 2), st(N, 0, 1, 1, 0, 2), S, 1, N) == 0);
  // Channel may only stay or advance by one.
  CHECK(feasibility(Algorithm::P0Q0, st(N, 0, 1, S, 0, 1), st(N, 0, 1, 1, 0, 3), S, 0, N) == 0);
  // Transmitting drains the buffer when no new frame arrives.
  CHECK(feasibility(Algorithm::P0Q1, st(N, 0, 1, 1, 2, 1), st(N, 0, 0, 2, 1, 1), S, 2, N) == 1);
  CHECK(feasibility(Algorithm::P0Q1, st(N, 0, 1, 1, 2, 1), st(N, 0, 0, 2, 2, 1), S, 2, N) == 0);
  // Going idle needs an empty buffer and no frame.
  CHECK(feasibility(Algorithm::P0Q1, st(N, 0, 1, 1, 0, 1), st(N, 0, 0, 0, 0, 1), S, 2, N) == 1);
  CHECK(feasibility(Algorithm::P0Q1, st(N, 0, 1, 1, 1, 1), st(N, 0, 0, 0, 0, 1), S, 2, N) == 0);
}

TEST_CASE("one channel, one stage, P0Q0 has exactly four states") {
  ScenarioConfig c = cfg(Algorithm::P0Q0, 1, 1, 0, TrafficParams(0.2, 0.3, 0.4, 0.6));
  const SingleRadioModel m = enumerate_states(c);
  REQUIRE(m.size() == 4);
  std::vector<std::tuple<int, int, int>> seen;
  for (const auto& s : m.states) seen.emplace_back(static_cast<int>(s.I.bits()), s.f, s.j);
  std::sort(seen.begin(), seen.end());
  CHECK(seen == std::vector<std::tuple<int, int, int>>{{0, 0, 0}, {0, 1, 1}, {1, 0, 0}, {1, 1, 1}});
}

TEST_CASE("saturated P0Q1 state count against the cross-product bound") {
  ScenarioConfig c = cfg(Algorithm::P0Q1, 4, 6, 0, TrafficParams(0.01, 0.01, 1.0, 0.0));
  const SingleRadioModel m = enumerate_states(c);
  // 2^6 * (S+1) * 6 states with f = 1, plus the transient empty start state.
  CHECK(m.size() - 1 <= 1920);
  CHECK(m.index_of(st(6, 0, 0, 0, 0, 1)).has_value());
  std::size_t with_frame = 0;
  for (const auto& s : m.states) with_frame += s.f == 1;
  CHECK(with_frame <= 1920);
}

TEST_CASE("initial state is enumerated and ordering is lexicographic on (c, j, b, f, I)") {
  for (Algorithm a : kAll) {
    ScenarioConfig c = cfg(a, 2, 3, a == Algorithm::P0Q0 ? 0 : 2, TrafficParams(0.1, 0.2, 0.3, 0.4));
    const SingleRadioModel m = enumerate_states(c);
    CHECK(m.index_of(st(3, 0, 0, 0, 0, 1)).has_value());
    auto key = [](const SingleRadioState& s) { return std::tuple(s.c, s.j, s.b, s.f, s.I.bits()); };
    CHECK(std::is_sorted(m.states.begin(), m.states.end(),
                         [&](const auto& x, const auto& y) { return key(x) < key(y); }));
    for (std::size_t k = 0; k < m.size(); ++k) CHECK(*m.index_of(m.states[k]) == k);
  }
}

TEST_CASE("state cap raises a capacity error") {
  ScenarioConfig c = cfg(Algorithm::P1Q1, 4, 6, 3, TrafficParams(0.1, 0.1, 0.5, 0.5));
  EnumerationOptions opt;
  opt.state_cap = 100;
  CHECK_THROWS_AS(enumerate_states(c, opt), CapacityError);
}

TEST_CASE("coin-flip channel: kernel and closed-form metrics") {
  const ScenarioConfig c = coin_flip_channel();
  const SingleRadioModel m = build_kernel(c);
  const auto from = st(1, 0, 1, 1, 0, 1);
  CHECK(m.probability(from, st(1, 0, 1, 1, 0, 1)) == doctest::Approx(0.5));
  CHECK(m.probability(from, st(1, 1, 1, 1, 0, 1)) == doctest::Approx(0.5));

  const MetricsReport r = analyze(c);
  CHECK(r.R == doctest::Approx(0.5 * c.sensing.W).epsilon(1e-12));
  CHECK(r.G == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("degenerate traffic") {
  // Channel busy forever after the first slot.
  ScenarioConfig busy = coin_flip_channel();
  busy.traffic = TrafficParams(1.0, 0.0, 1.0, 0.0);
  busy.N = 2;
  CHECK(analyze(busy).R == doctest::Approx(0.0).scale(1e6));

  ScenarioConfig quiet_pu = cfg(Algorithm::P1Q1, 2, 3, 1, TrafficParams(0.0, 0.2, 0.4, 0.3));
  CHECK(analyze(quiet_pu).G == 0.0);

  ScenarioConfig no_su = cfg(Algorithm::P0Q1, 2, 3, 1, TrafficParams(0.2, 0.2, 0.0, 0.3));
  const MetricsReport r = analyze(no_su);
  CHECK(r.R == 0.0);
  CHECK(r.G == 0.0);
}

TEST_CASE("random small configs: stochastic kernels, bounded metrics") {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> u(0.02, 0.98);
  for (int trial = 0; trial < 40; ++trial) {
    const Algorithm a = kAll[trial % 4];
    const int S = 1 + trial % 3;
    const int N = 1 + (trial / 4) % 3;
    const int B = a == Algorithm::P0Q0 ? 0 : trial % 3;
    const SensingParams s(u(rng) / 2, u(rng) / 2, u(rng) / 2, u(rng) / 2, 1e-3, 0.1e-3, 1e6);
    ScenarioConfig c = cfg(a, S, N, B, TrafficParams(u(rng), u(rng), u(rng), u(rng)), s);
    CAPTURE(trial);
    const SingleRadioModel m = build_kernel(c);
    CHECK(verify_stochastic(m).ok());
    const MetricsReport r = analyze(c);
    CHECK(r.R >= 0.0);
    CHECK(r.R <= throughput_upper_bound(c) + 1e-9);
    CHECK(r.G >= 0.0);
    CHECK(r.G <= 1.0);
    CHECK(r.delivery_rate >= 0.0);
    CHECK(r.delivery_rate <= 1.0);
    CHECK(r.residual <= 1e-10);
  }
}

TEST_CASE("P0Q0 metrics do not depend on a nominal buffer") {
  ScenarioConfig c = cfg(Algorithm::P0Q0, 2, 3, 0, TrafficParams(0.01, 0.01, 0.5, 0.1));
  const MetricsReport base = analyze(c);
  AnalysisOptions relaxed;
  relaxed.enumeration.enforce_config_rules = false;
  for (int B = 1; B <= 5; ++B) {
    c.B = B;
    CHECK_THROWS_AS(analyze(c), ConfigError);
    const MetricsReport r = analyze(c, relaxed);
    CHECK(r.R == base.R);
    CHECK(r.G == base.G);
    CHECK(r.state_count == base.state_count);
  }
}

TEST_CASE("blind sensing: P0Q1 never enters quiet and collides like an always-on transmitter") {
  const SensingParams blind(0.0, 1.0, 0.0, 1.0, 1e-3, 0.1e-3, 1e6);
  for (const TrafficParams& t : {TrafficParams(0.01, 0.01, 1.0, 0.0), TrafficParams(0.5, 0.1, 1.0, 0.0)}) {
    ScenarioConfig c = cfg(Algorithm::P0Q1, 2, 3, 0, t, blind);
    const SingleRadioModel m = build_kernel(c);
    const StationaryDistribution d = solve_stationary(m);
    double quiet_mass = 0.0;
    for (std::size_t k = 0; k < m.size(); ++k)
      if (m.states[k].j == c.S + 1) quiet_mass += d.pi[k];
    CHECK(quiet_mass == 0.0);

    // Baseline: SU on one channel every slot; two-state PU chain on that channel.
    const double pi_busy = t.p_pa / (t.p_pa + t.p_pd);
    const double baseline_G = pi_busy * (1.0 - t.p_pd) + (1.0 - pi_busy) * t.p_pa;
    CHECK(collision_rate(m, d.pi, c) == doctest::Approx(baseline_G).epsilon(1e-10));
  }
}

TEST_CASE("metric functions check the distribution length") {
  const ScenarioConfig c = coin_flip_channel();
  const SingleRadioModel m = build_kernel(c);
  std::vector<double> wrong(m.size() + 1, 0.0);
  CHECK_THROWS_AS(throughput(m, wrong, c), InputShapeError);
  CHECK_THROWS_AS(collision_rate(m, wrong, c), InputShapeError);
}
