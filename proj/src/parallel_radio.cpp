#include "mstage/parallel_radio.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <string>

#include "detail/pu_table.hpp"
#include "detail/reachability.hpp"
#include "mstage/errors.hpp"

namespace mstage {
namespace {

// Mode consistency of a state against its own accounting, without allocating.
bool consistent(const ParallelRadioState& s2, int b_prev, int S, int B) {
  const int M = s2.radios();
  const int F_T = b_prev + std::popcount(s2.F);
  int M_F = 0;
  for (int m = 1; m <= M; ++m) M_F += s2.mode(m) != S + 1;
  const int M_A = std::min(F_T, M_F);
  if (F_T < M_A) return false;
  if (s2.b != std::min(F_T - M_A, B)) return false;
  int assigned = 0;
  for (int m = 1; m <= M; ++m) {
    const int j = s2.mode(m);
    if (j == S + 1) continue;
    if (assigned < M_A) {
      if (j < 1 || j > S) return false;
    } else if (j != 0) {
      return false;
    }
    ++assigned;
  }
  return true;
}

RadioRole role_of(int j, int S) {
  if (j == 0) return RadioRole::Idle;
  if (j == S + 1) return RadioRole::Quiet;
  return RadioRole::Active;
}

std::string describe(const ParallelRadioState& s) {
  std::ostringstream os;
  os << "{I=";
  for (int m = 1; m <= s.radios(); ++m) os << (s.I.busy(m) ? '1' : '0');
  os << ", F=";
  for (int m = 1; m <= s.radios(); ++m) os << s.frame(m);
  os << ", J=[";
  for (int m = 1; m <= s.radios(); ++m) os << (m > 1 ? "," : "") << s.mode(m);
  os << "], b=" << s.b << '}';
  return os.str();
}

void require_aligned(const ParallelRadioModel& model, std::span<const double> pi) {
  if (pi.size() != model.size()) {
    throw InputShapeError("distribution has " + std::to_string(pi.size()) +
                          " entries but the model has " + std::to_string(model.size()) + " states");
  }
}

}  // namespace

std::uint64_t ParallelRadioState::key() const {
  std::uint64_t modes = 0;
  for (int m = 0; m < radios(); ++m) modes |= static_cast<std::uint64_t>(J[m] & 0xF) << (4 * m);
  return static_cast<std::uint64_t>(I.bits()) | (static_cast<std::uint64_t>(F) << 8) |
         (modes << 16) | (static_cast<std::uint64_t>(b & 0xFF) << 48);
}

RadioSets radio_sets(const ParallelRadioState& state, int S) {
  RadioSets sets;
  for (int m = 1; m <= state.radios(); ++m) {
    switch (role_of(state.mode(m), S)) {
      case RadioRole::Active: sets.active.push_back(m); break;
      case RadioRole::Quiet: sets.quiet.push_back(m); break;
      case RadioRole::Idle: sets.idle.push_back(m); break;
    }
  }
  return sets;
}

FrameAccounting frame_accounting(const ParallelRadioState& state, int b_prev,
                                 const ScenarioConfig& cfg) {
  const int M = state.radios();
  const int S = cfg.S;
  FrameAccounting acct;
  acct.F_N = std::popcount(state.F);
  acct.F_T = b_prev + acct.F_N;
  for (int m = 1; m <= M; ++m) {
    if (state.mode(m) == S + 1) {
      acct.sets.quiet.push_back(m);
    } else {
      ++acct.M_F;
    }
  }
  acct.M_A = std::min(acct.F_T, acct.M_F);
  int assigned = 0;
  for (int m = 1; m <= M; ++m) {
    if (state.mode(m) == S + 1) continue;
    (assigned++ < acct.M_A ? acct.sets.active : acct.sets.idle).push_back(m);
  }
  acct.b_next = acct.M_F >= acct.F_T ? 0 : std::min(cfg.B, acct.F_T - acct.M_A);
  return acct;
}

double su_traffic_prob_parallel(std::uint32_t F1, std::uint32_t F2, int M, const TrafficParams& t) {
  if (M < 1 || M > kMaxRadios) throw InputShapeError("radio count out of range");
  const std::uint32_t mask = (1U << M) - 1U;
  if ((F1 & ~mask) != 0 || (F2 & ~mask) != 0) {
    throw InputShapeError("frame vectors longer than the radio count");
  }
  auto bit = [](std::uint32_t v, int m) { return static_cast<int>((v >> (m - 1)) & 1U); };
  double p = su_traffic_transition_prob(bit(F1, M), bit(F2, 1), t);
  for (int m = 1; m < M && p != 0.0; ++m) p *= su_traffic_transition_prob(bit(F2, m), bit(F2, m + 1), t);
  return p;
}

double radio_sensing_factor(RadioRole set, int j1, int j2, bool pu_present, const SensingParams& p,
                            int S) {
  switch (set) {
    case RadioRole::Active: {
      if (j1 < 1 || j1 > S) return 0.0;
      const double alarm = pu_present ? 1.0 - p.p_ms : p.p_fs;
      if (j2 == 0 && j1 < S) return 1.0;
      if (j2 == j1 + 1) return alarm;
      if (j2 == 1 || (j2 == 0 && j1 == S)) return 1.0 - alarm;
      return 0.0;
    }
    case RadioRole::Quiet: {
      const double alarm = pu_present ? 1.0 - p.p_mt : p.p_ft;
      if (j2 == S + 1) return alarm;
      if (j2 == 0 || j2 == 1) return 1.0 - alarm;
      return 0.0;
    }
    case RadioRole::Idle:
      return (j2 == 0 || j2 == 1) ? 1.0 : 0.0;
  }
  return 0.0;
}

double sensing_outcome_prob_parallel(const ParallelRadioState& s1, const ParallelRadioState& s2,
                                     const RadioSets& sets1, const SensingParams& p, int S) {
  if (s1.radios() != s2.radios()) throw InputShapeError("states differ in radio count");
  double prob = 1.0;
  auto apply = [&](const std::vector<int>& radios, RadioRole role) {
    for (int m : radios) prob *= radio_sensing_factor(role, s1.mode(m), s2.mode(m), s2.I.busy(m), p, S);
  };
  apply(sets1.active, RadioRole::Active);
  apply(sets1.quiet, RadioRole::Quiet);
  apply(sets1.idle, RadioRole::Idle);
  return prob;
}

int feasibility_parallel(const ParallelRadioState& s1, const ParallelRadioState& s2,
                         const ScenarioConfig& cfg) {
  if (s1.radios() != s2.radios()) throw InputShapeError("states differ in radio count");
  return consistent(s2, s1.b, cfg.S, cfg.B) ? 1 : 0;
}

namespace {

ParallelRadioModel build(const ScenarioConfig& cfg, const EnumerationOptions& opt,
                         bool with_kernel) {
  cfg.validate();
  if (cfg.architecture != Architecture::Parallel) {
    throw ConfigError("parallel-radio model requires architecture PARALLEL");
  }
  const int M = cfg.M;
  const int S = cfg.S;
  const int B = cfg.B;
  const detail::PuTable pu(cfg.traffic, M);
  const std::uint32_t patterns = 1U << M;

  // Per-radio candidate next modes with their factor, keyed by (j1, PU present).
  struct Option {
    int j2;
    double p;
  };
  std::vector<std::array<std::vector<Option>, 2>> options(static_cast<std::size_t>(S) + 2);
  for (int j1 = 0; j1 <= S + 1; ++j1) {
    for (int present = 0; present <= 1; ++present) {
      for (int j2 = 0; j2 <= S + 1; ++j2) {
        const double f = radio_sensing_factor(role_of(j1, S), j1, j2, present == 1, cfg.sensing, S);
        if (f != 0.0) options[j1][present].push_back({j2, f});
      }
    }
  }

  auto successors = [&](const ParallelRadioState& s1,
                        std::vector<std::pair<ParallelRadioState, double>>& out) {
    std::array<const std::vector<Option>*, kMaxRadios> per_radio{};
    std::array<std::size_t, kMaxRadios> pick{};
    for (std::uint32_t i2 = 0; i2 < patterns; ++i2) {
      const double p1 = pu(s1.I.bits(), i2);
      if (p1 == 0.0) continue;
      ParallelRadioState s2;
      s2.I = ChannelOccupancy(M, i2);
      for (int m = 1; m <= M; ++m) per_radio[m - 1] = &options[s1.mode(m)][s2.I.busy(m) ? 1 : 0];
      for (std::uint32_t f2 = 0; f2 < patterns; ++f2) {
        const double p2 = su_traffic_prob_parallel(s1.F, f2, M, cfg.traffic);
        if (p2 == 0.0) continue;
        s2.F = f2;
        pick.fill(0);
        // Odometer over the per-radio options.
        while (true) {
          double p3 = 1.0;
          for (int m = 0; m < M; ++m) {
            const auto& o = (*per_radio[m])[pick[m]];
            s2.J[m] = static_cast<std::uint8_t>(o.j2);
            p3 *= o.p;
          }
          for (int b2 = 0; b2 <= B; ++b2) {
            s2.b = b2;
            if (consistent(s2, s1.b, S, B)) out.emplace_back(s2, p1 * p2 * p3);
          }
          int m = 0;
          while (m < M && ++pick[m] == per_radio[m]->size()) pick[m++] = 0;
          if (m == M) break;
        }
      }
    }
  };
  auto less = [M](const ParallelRadioState& x, const ParallelRadioState& y) {
    for (int m = 0; m < M; ++m) {
      if (x.J[m] != y.J[m]) return x.J[m] < y.J[m];
    }
    if (x.b != y.b) return x.b < y.b;
    if (x.F != y.F) return x.F < y.F;
    return x.I.bits() < y.I.bits();
  };
  ParallelRadioState initial;
  initial.I = ChannelOccupancy(M, 0);
  return detail::reachable_model(initial, successors, less, describe, opt.state_cap, with_kernel);
}

}  // namespace

ParallelRadioModel enumerate_states_parallel(const ScenarioConfig& cfg,
                                             const EnumerationOptions& opt) {
  return build(cfg, opt, false);
}

ParallelRadioModel build_kernel_parallel(const ScenarioConfig& cfg, const EnumerationOptions& opt) {
  return build(cfg, opt, true);
}

double throughput_parallel(const ParallelRadioModel& model, std::span<const double> pi,
                           const ScenarioConfig& cfg) {
  require_aligned(model, pi);
  const auto& t = cfg.traffic;
  double free_mass = 0.0;
  for (std::size_t k = 0; k < model.size(); ++k) {
    const auto& s = model.states[k];
    for (int m = 1; m <= s.radios(); ++m) {
      const int j = s.mode(m);
      if (j < 1 || j > cfg.S) continue;
      free_mass += pi[k] * (s.I.busy(m) ? t.p_pd : 1.0 - t.p_pa);
    }
  }
  return cfg.sensing.W * cfg.sensing.transmit_fraction() * free_mass;
}

double collision_rate_parallel(const ParallelRadioModel& model, std::span<const double> pi,
                               const ScenarioConfig& cfg) {
  require_aligned(model, pi);
  const auto& t = cfg.traffic;
  double g = 0.0;
  for (std::size_t k = 0; k < model.size(); ++k) {
    const auto& s = model.states[k];
    for (int m = 1; m <= s.radios(); ++m) {
      const int j = s.mode(m);
      if (j < 1 || j > cfg.S) continue;
      g += pi[k] * (s.I.busy(m) ? 1.0 - t.p_pd : t.p_pa);
    }
  }
  return g;
}

double frame_arrival_rate_parallel(const ParallelRadioModel& model, std::span<const double> pi) {
  require_aligned(model, pi);
  double frames = 0.0;
  for (std::size_t k = 0; k < model.size(); ++k) frames += pi[k] * std::popcount(model.states[k].F);
  return frames;
}

}  // namespace mstage
