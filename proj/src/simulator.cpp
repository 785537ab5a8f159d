#include "mstage/simulator.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <cmath>
#include <limits>
#include <mutex>
#include <random>
#include <thread>
#include <vector>

#include "mstage/errors.hpp"

namespace mstage {
namespace {

class Coin {
 public:
  Coin(std::uint64_t seed, int replication) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(replication), 0x6d73u};
    rng_.seed(seq);
  }
  // 53-bit uniform in [0, 1): p = 1 always fires, p = 0 never does.
  bool operator()(double p) { return static_cast<double>(rng_() >> 11) * 0x1.0p-53 < p; }

 private:
  std::mt19937_64 rng_;
};

struct Modes {
  int S;
  bool quiet, presense;
  int Q() const { return S + 1; }
  int P() const { return S + 2; }
  bool stage(int j) const { return j >= 1 && j <= S; }
};

Modes modes_of(const ScenarioConfig& c) {
  const bool q = c.algorithm == Algorithm::P0Q1 || c.algorithm == Algorithm::P1Q1 ||
                 c.algorithm == Algorithm::Parallel;
  const bool p = c.algorithm == Algorithm::P1Q0 || c.algorithm == Algorithm::P1Q1;
  return {c.S, q, p};
}

void evolve_pu(std::vector<std::uint8_t>& pu, const TrafficParams& t, Coin& coin) {
  for (auto& x : pu) x = x ? !coin(t.p_pd) : coin(t.p_pa);
}

int next_frame(int f, const TrafficParams& t, Coin& coin) {
  return f ? !coin(t.p_sd) : coin(t.p_sa);
}

SimCounts run_single(const SimConfig& sc, int replication) {
  const ScenarioConfig& cfg = sc.scenario;
  const TrafficParams& t = cfg.traffic;
  const SensingParams& p = cfg.sensing;
  const Modes md = modes_of(cfg);
  Coin coin(sc.seed, replication);

  std::vector<std::uint8_t> pu(cfg.N, 0);
  int f = 0, j = 0, b = 0, b_prev = 0, c = 0, drop = 0;
  SimCounts n;

  for (std::int64_t slot = 0; slot < sc.slots; ++slot) {
    if (slot == sc.warmup) n.buffer_start = b_prev;
    if (slot >= sc.warmup) {
      ++n.slots;
      n.generated += f;
      n.dropped += drop;
      if (md.stage(j)) (pu[c] ? n.collided : n.delivered) += 1;
      for (auto x : pu) n.busy_channel_slots += x;
    }

    bool alarm = false;
    if (md.stage(j)) alarm = coin(pu[c] ? 1.0 - p.p_ms : p.p_fs);
    else if (j != 0) alarm = coin(pu[c] ? 1.0 - p.p_mt : p.p_ft);

    const int f_next = next_frame(f, t, coin);
    evolve_pu(pu, t, coin);

    int j2 = j, b2 = b, c2 = c;
    drop = 0;
    auto transmit = [&](int mode) {
      j2 = mode;
      b2 = f_next ? b : b - 1;
    };
    auto hold = [&](int mode) {
      j2 = mode;
      b2 = b;
      if (f_next) {
        if (b < cfg.B) ++b2;
        else drop = 1;
      }
    };
    auto hop = [&] { c2 = (c + 1) % cfg.N; };
    const bool backlog = f_next == 1 || b > 0;

    if (j == 0) {
      if (f_next) {
        if (md.presense) hold(md.P());
        else transmit(1);
      }
    } else if (!backlog) {
      j2 = 0;
      b2 = 0;
    } else if (md.stage(j)) {
      if (!alarm) transmit(1);
      else if (j < cfg.S) transmit(j + 1);
      else if (md.quiet) hold(md.Q());
      else if (md.presense) { hop(); hold(md.P()); }
      else { hop(); transmit(1); }
    } else {
      if (!alarm) transmit(1);
      else {
        hop();
        if (md.presense) hold(md.P());
        else transmit(1);
      }
    }

    b_prev = b;
    f = f_next;
    j = j2;
    b = b2;
    c = c2;
  }
  n.buffer_end = b_prev;
  return n;
}

SimCounts run_parallel(const SimConfig& sc, int replication) {
  const ScenarioConfig& cfg = sc.scenario;
  const TrafficParams& t = cfg.traffic;
  const SensingParams& p = cfg.sensing;
  const int M = cfg.M, S = cfg.S, Q = S + 1;
  Coin coin(sc.seed, replication);

  std::vector<std::uint8_t> pu(M, 0);
  std::array<int, 8> J{}, J2{};
  std::array<bool, 8> alarm{}, free_radio{};
  std::array<int, 8> cand{};
  std::uint32_t F = 0;
  int b = 0, b_prev = 0, drop = 0;
  SimCounts n;

  for (std::int64_t slot = 0; slot < sc.slots; ++slot) {
    if (slot == sc.warmup) n.buffer_start = b_prev;
    if (slot >= sc.warmup) {
      ++n.slots;
      n.generated += std::popcount(F);
      n.dropped += drop;
      for (int m = 0; m < M; ++m) {
        if (J[m] >= 1 && J[m] <= S) (pu[m] ? n.collided : n.delivered) += 1;
        n.busy_channel_slots += pu[m];
      }
    }

    for (int m = 0; m < M; ++m) {
      alarm[m] = false;
      if (J[m] >= 1 && J[m] <= S) alarm[m] = coin(pu[m] ? 1.0 - p.p_ms : p.p_fs);
      else if (J[m] == Q) alarm[m] = coin(pu[m] ? 1.0 - p.p_mt : p.p_ft);
    }

    // Frame m+1 follows frame m; the first follows the last frame of the previous slot.
    std::uint32_t F_next = 0;
    int prev = (F >> (M - 1)) & 1U;
    for (int m = 0; m < M; ++m) {
      prev = next_frame(prev, t, coin);
      F_next |= static_cast<std::uint32_t>(prev) << m;
    }
    evolve_pu(pu, t, coin);

    int available = 0;
    for (int m = 0; m < M; ++m) {
      const int j = J[m];
      const bool to_quiet = alarm[m] && (j == S || j == Q);
      free_radio[m] = !to_quiet;
      cand[m] = (alarm[m] && j < S && j >= 1) ? j + 1 : 1;
      available += free_radio[m];
    }
    const int total = b + std::popcount(F_next);
    const int sent = std::min(total, available);
    int assigned = 0;
    for (int m = 0; m < M; ++m) {
      if (!free_radio[m]) J2[m] = Q;
      else if (assigned < sent) { J2[m] = cand[m]; ++assigned; }
      else J2[m] = 0;
    }
    const int b2 = available >= total ? 0 : std::min(cfg.B, total - sent);
    drop = total - sent - b2;

    b_prev = b;
    b = b2;
    F = F_next;
    J = J2;
  }
  n.buffer_end = b_prev;
  return n;
}

struct Moments {
  double mean = 0.0, se = 0.0;
};

Moments moments(const std::vector<double>& x) {
  Moments m;
  const double k = static_cast<double>(x.size());
  for (double v : x) m.mean += v;
  m.mean /= k;
  if (x.size() < 2) {
    m.se = std::numeric_limits<double>::quiet_NaN();
    return m;
  }
  double ss = 0.0;
  for (double v : x) ss += (v - m.mean) * (v - m.mean);
  m.se = std::sqrt(ss / (k - 1.0) / k);
  return m;
}

MetricComparison compare_one(double a, double s, double se, double sigmas) {
  MetricComparison c;
  c.analytic = a;
  c.simulated = s;
  c.se = se;
  const double d = std::abs(s - a);
  c.rel_error = a != 0.0 ? d / std::abs(a) : d;
  if (d == 0.0) c.z = 0.0;
  else c.z = se > 0.0 ? d / se : std::numeric_limits<double>::infinity();
  c.within = c.z <= sigmas;  // NaN se never passes
  c.margin = sigmas - c.z;
  return c;
}

}  // namespace

void SimConfig::validate() const {
  scenario.validate();
  if (slots <= 0) throw ConfigError("simulation slots must be positive");
  if (warmup < 0 || warmup >= slots) throw ConfigError("warmup must satisfy 0 <= warmup < slots");
  if (replications < 1) throw ConfigError("replications must be at least 1");
  if (threads < 0) throw ConfigError("threads must be non-negative");
}

SimCounts& SimCounts::operator+=(const SimCounts& o) {
  slots += o.slots;
  generated += o.generated;
  delivered += o.delivered;
  collided += o.collided;
  dropped += o.dropped;
  buffer_start += o.buffer_start;
  buffer_end += o.buffer_end;
  busy_channel_slots += o.busy_channel_slots;
  return *this;
}

bool SimCounts::conserved() const {
  return generated == delivered + collided + dropped + (buffer_end - buffer_start);
}

SimCounts simulate_replication(const SimConfig& cfg, int replication) {
  cfg.validate();
  return cfg.scenario.architecture == Architecture::Parallel ? run_parallel(cfg, replication)
                                                             : run_single(cfg, replication);
}

SimMetrics simulate(const SimConfig& cfg) {
  cfg.validate();
  const int reps = cfg.replications;
  std::vector<SimCounts> counts(reps);

  int workers = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, reps);
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_lock;
  auto work = [&] {
    for (int r = next++; r < reps; r = next++) {
      try {
        counts[r] = simulate_replication(cfg, r);
      } catch (...) {
        std::lock_guard lock(failure_lock);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  const ScenarioConfig& sc = cfg.scenario;
  const double rate = sc.sensing.W * sc.sensing.transmit_fraction();
  const int channels = sc.architecture == Architecture::Parallel ? sc.M : sc.N;
  std::vector<double> R, G, D, occ;
  for (const SimCounts& c : counts) {
    const double slots = static_cast<double>(c.slots);
    R.push_back(rate * static_cast<double>(c.delivered) / slots);
    G.push_back(static_cast<double>(c.collided) / slots);
    D.push_back(c.generated > 0 ? static_cast<double>(c.delivered) / static_cast<double>(c.generated)
                                : 1.0);
    occ.push_back(static_cast<double>(c.busy_channel_slots) / (slots * channels));
  }

  SimMetrics m;
  m.scenario = sc;
  m.replications = reps;
  const Moments r = moments(R), g = moments(G), d = moments(D), o = moments(occ);
  m.R = r.mean;
  m.R_se = r.se;
  m.G = g.mean;
  m.G_se = g.se;
  m.delivery_rate = d.mean;
  m.delivery_se = d.se;
  m.occupancy = o.mean;
  m.occupancy_se = o.se;
  for (const SimCounts& c : counts) m.totals += c;
  m.per_replication = std::move(counts);
  return m;
}

MetricsReport SimMetrics::report() const {
  MetricsReport r;
  r.scenario = scenario;
  r.source = Provenance::Simulated;
  r.R = R;
  r.G = G;
  r.delivery_rate = delivery_rate;
  r.R_se = R_se;
  r.G_se = G_se;
  r.delivery_se = delivery_se;
  r.solver = "monte-carlo";
  return r;
}

Comparison compare(const MetricsReport& analytic, const SimMetrics& sim, double sigmas) {
  if (!(analytic.scenario == sim.scenario))
    throw ComparisonError("analytic and simulated results describe different scenarios");
  Comparison c;
  c.R = compare_one(analytic.R, sim.R, sim.R_se, sigmas);
  c.G = compare_one(analytic.G, sim.G, sim.G_se, sigmas);
  c.delivery = compare_one(analytic.delivery_rate, sim.delivery_rate, sim.delivery_se, sigmas);
  c.pass = c.R.within && c.G.within;
  return c;
}

}  // namespace mstage
