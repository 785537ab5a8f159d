#include <doctest.h>

#include <cmath>

#include "mstage/analysis.hpp"
#include "mstage/errors.hpp"
#include "mstage/simulator.hpp"

using namespace mstage;

namespace {

ScenarioConfig make(Algorithm a, int S, int N, int B, TrafficParams t,
                    SensingParams s = SensingParams(0.1, 0.1, 0.02, 0.02, 1e-3, 2.4e-4, 1e6)) {
  ScenarioConfig c;
  c.algorithm = a;
  c.S = S;
  c.N = N;
  c.M = a == Algorithm::Parallel ? N : 1;
  c.architecture = a == Algorithm::Parallel ? Architecture::Parallel : Architecture::Single;
  c.B = B;
  c.traffic = t;
  c.sensing = s;
  return c;
}

SimConfig sim_of(const ScenarioConfig& c, std::int64_t slots = 100'000, int reps = 8) {
  SimConfig s;
  s.scenario = c;
  s.slots = slots;
  s.warmup = 2'000;
  s.replications = reps;
  s.seed = 42;
  return s;
}

ScenarioConfig coin_flip() {
  return make(Algorithm::P0Q0, 1, 1, 0, TrafficParams(0.5, 0.5, 1.0, 0.0),
              SensingParams(0.0, 0.0, 0.0, 0.0, 1e-3, 0.0, 1e6));
}

}  // namespace

TEST_CASE("config validation") {
  SimConfig s = sim_of(coin_flip());
  CHECK_NOTHROW(s.validate());
  s.warmup = s.slots;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = sim_of(coin_flip());
  s.replications = 0;
  CHECK_THROWS_AS(simulate(s), ConfigError);
}

TEST_CASE("no SU arrivals means nothing is sent") {
  const auto m = simulate(sim_of(make(Algorithm::P1Q1, 2, 3, 2, TrafficParams(0.2, 0.3, 0.0, 0.5)), 20'000, 3));
  CHECK(m.R == 0.0);
  CHECK(m.G == 0.0);
  CHECK(m.totals.generated == 0);
  CHECK(m.delivery_rate == 1.0);
}

TEST_CASE("coin-flip channel within three standard errors of one half") {
  const auto m = simulate(sim_of(coin_flip()));
  CHECK(std::abs(m.R - 0.5e6) <= 3.0 * m.R_se);
  CHECK(std::abs(m.G - 0.5) <= 3.0 * m.G_se);
  CHECK(std::abs(m.occupancy - 0.5) <= 3.0 * m.occupancy_se);
  CHECK(m.R_se > 0.0);
}

TEST_CASE("frame counts are conserved") {
  for (Algorithm a : {Algorithm::P0Q1, Algorithm::P1Q0, Algorithm::P1Q1, Algorithm::Parallel}) {
    const auto c = make(a, 2, 3, 3, TrafficParams(0.1, 0.2, 0.4, 0.3));
    const auto m = simulate(sim_of(c, 30'000, 3));
    for (const SimCounts& r : m.per_replication) {
      CHECK(r.conserved());
      CHECK(r.slots == 28'000);
      CHECK(r.buffer_end <= c.B);
    }
    CHECK(m.totals.generated == m.totals.delivered + m.totals.collided + m.totals.dropped +
                                   (m.totals.buffer_end - m.totals.buffer_start));
  }
}

TEST_CASE("results depend on the seed only") {
  auto s = sim_of(make(Algorithm::P1Q1, 2, 4, 2, TrafficParams(0.05, 0.1, 0.6, 0.2)), 20'000, 5);
  s.threads = 1;
  const auto one = simulate(s);
  s.threads = 4;
  const auto four = simulate(s);
  CHECK(one.R == four.R);
  CHECK(one.G == four.G);
  CHECK(one.R_se == four.R_se);
  for (int r = 0; r < 5; ++r) {
    CHECK(one.per_replication[r].delivered == four.per_replication[r].delivered);
    CHECK(simulate_replication(s, r).collided == one.per_replication[r].collided);
  }
  s.seed = 43;
  CHECK(simulate(s).R != one.R);
}

TEST_CASE("single replication has no standard error") {
  const auto m = simulate(sim_of(coin_flip(), 10'000, 1));
  CHECK(std::isnan(m.R_se));
  const auto c = compare(analyze(coin_flip()), m);
  CHECK_FALSE(c.pass);
}

TEST_CASE("PU occupancy matches the stationary fraction") {
  const TrafficParams t(0.03, 0.07, 1.0, 0.0);
  const auto m = simulate(sim_of(make(Algorithm::P0Q0, 1, 4, 0, t)));
  CHECK(std::abs(m.occupancy - steady_state_occupancy(t)) <= 3.0 * m.occupancy_se);
}

TEST_CASE("compare: z scores, margins and scenario mismatch") {
  const ScenarioConfig c = coin_flip();
  MetricsReport a;
  a.scenario = c;
  a.R = 100.0;
  a.G = 0.2;
  a.delivery_rate = 0.9;
  SimMetrics s;
  s.scenario = c;
  s.R_se = 1.0;
  s.G_se = 0.01;
  s.delivery_se = 0.01;
  s.G = 0.2;
  s.delivery_rate = 0.9;

  s.R = 100.0;
  auto r = compare(a, s);
  CHECK(r.R.z == 0.0);
  CHECK(r.pass);

  s.R = 102.0;
  r = compare(a, s);
  CHECK(r.R.z == doctest::Approx(2.0));
  CHECK(r.R.margin == doctest::Approx(1.0));
  CHECK(r.R.rel_error == doctest::Approx(0.02));
  CHECK(r.pass);

  s.R = 95.0;
  r = compare(a, s);
  CHECK(r.R.z == doctest::Approx(5.0));
  CHECK(r.R.margin == doctest::Approx(-2.0));
  CHECK_FALSE(r.pass);
  CHECK(compare(a, s, 6.0).pass);

  s.scenario.S = 2;
  CHECK_THROWS_AS(compare(a, s), ComparisonError);
}

TEST_CASE("simulated report carries its provenance") {
  const auto rep = simulate(sim_of(coin_flip(), 5'000, 2)).report();
  CHECK(rep.source == Provenance::Simulated);
  CHECK(rep.solver == "monte-carlo");
}

// Smoke agreement on small chains; the full grid lives in the acceptance run.
TEST_CASE("analytic and simulated metrics agree") {
  const TrafficParams t(0.05, 0.1, 0.6, 0.2);
  for (Algorithm a : {Algorithm::P0Q0, Algorithm::P0Q1, Algorithm::P1Q0, Algorithm::P1Q1,
                      Algorithm::Parallel}) {
    CAPTURE(to_string(a));
    const auto c = make(a, 2, 3, a == Algorithm::P0Q0 ? 0 : 2, t);
    const auto cmp = compare(analyze(c), simulate(sim_of(c, 200'000, 10)), 4.0);
    CHECK(cmp.R.within);
    CHECK(cmp.G.within);
    CHECK(cmp.delivery.within);
  }
}
