#include "mstage/single_radio.hpp"

#include <algorithm>
#include <sstream>
#include <string>
#include <tuple>

#include "detail/pu_table.hpp"
#include "detail/reachability.hpp"
#include "mstage/errors.hpp"

namespace mstage {
namespace {

bool has_quiet(Algorithm a) { return a == Algorithm::P0Q1 || a == Algorithm::P1Q1; }
bool has_presensing(Algorithm a) { return a == Algorithm::P1Q0 || a == Algorithm::P1Q1; }

// Full-slot modes that end either on the same channel (stage 1) or with a switch.
bool is_full_slot_mode(Algorithm a, int j, int S) {
  return (has_quiet(a) && j == S + 1) || (has_presensing(a) && j == S + 2);
}

// Modes from which an alarm moves the SU to the next channel.
bool switches_on_alarm(Algorithm a, int j, int S) {
  switch (a) {
    case Algorithm::P0Q0: return j == S;
    case Algorithm::P0Q1: return j == S + 1;
    case Algorithm::P1Q1: return j == S + 1 || j == S + 2;
    case Algorithm::P1Q0: return j == S || j == S + 2;
    case Algorithm::Parallel: break;
  }
  return false;
}

// Mode entered on the new channel after a switch.
int landing_mode(Algorithm a, int S) { return has_presensing(a) ? S + 2 : 1; }

// Last stage from which an alarm advances to j + 1 on the same channel.
int last_advancing_stage(Algorithm a, int S) { return has_quiet(a) ? S : S - 1; }

// C3: new frame, buffer untouched. C4: no new frame, one buffered frame sent.
bool keeps_transmitting(const SingleRadioState& s1, const SingleRadioState& s2) {
  return (s2.f == 1 && s2.b == s1.b) || (s2.f == 0 && s1.b > 0 && s2.b == s1.b - 1);
}

// Entry into a full-slot mode: the new frame is buffered (or dropped when full);
// without a new frame the SU must still hold a buffered one.
bool buffers_for_full_slot(const SingleRadioState& s1, const SingleRadioState& s2, int B) {
  return (s2.f == 1 && s2.b == std::min(s1.b + 1, B)) ||
         (s2.f == 0 && s2.b == s1.b && s1.b > 0);
}

std::string describe(const SingleRadioState& s) {
  std::ostringstream os;
  os << "{I=";
  for (int x = 1; x <= s.I.size(); ++x) os << (s.I.busy(x) ? '1' : '0');
  os << ", f=" << s.f << ", j=" << s.j << ", b=" << s.b << ", c=" << s.c << '}';
  return os.str();
}

}  // namespace

bool ModeSets::contains(int j) const {
  return std::find(gamma.begin(), gamma.end(), j) != gamma.end();
}

ModeSets mode_sets(Algorithm a, int S) {
  if (a == Algorithm::Parallel) throw ConfigError("mode_sets: PARALLEL is not a single-radio algorithm");
  ModeSets m;
  for (int j = 0; j <= S; ++j) m.gamma.push_back(j);
  for (int j = 1; j <= S; ++j) m.gamma_s.push_back(j);
  if (has_quiet(a)) {
    m.quiet = S + 1;
    m.gamma.push_back(S + 1);
  }
  if (has_presensing(a)) {
    m.presensing = S + 2;
    m.gamma.push_back(S + 2);
  }
  m.gamma_a.assign(m.gamma.begin() + 1, m.gamma.end());
  return m;
}

std::uint64_t SingleRadioState::key() const {
  return static_cast<std::uint64_t>(I.bits()) | (static_cast<std::uint64_t>(f) << 16) |
         (static_cast<std::uint64_t>(j) << 17) | (static_cast<std::uint64_t>(b) << 21) |
         (static_cast<std::uint64_t>(c) << 29);
}

double sensing_outcome_prob(Algorithm a, int j1, int j2, bool pu_present, bool same_channel,
                            const SensingParams& p, int S) {
  const ModeSets modes = mode_sets(a, S);
  if (!modes.contains(j1) || !modes.contains(j2)) {
    throw InvalidModeError("mode pair (" + std::to_string(j1) + ", " + std::to_string(j2) +
                           ") outside the mode set of " + std::string(to_string(a)));
  }
  const double stage_alarm = pu_present ? 1.0 - p.p_ms : p.p_fs;
  const double full_slot_alarm = pu_present ? 1.0 - p.p_mt : p.p_ft;
  const bool stage = modes.is_stage(j1);

  if (same_channel) {
    if (j1 == 0 || j2 == 0) return 1.0;
    if (stage && j2 == j1 + 1 && j1 <= last_advancing_stage(a, S)) return stage_alarm;
    if (stage && j2 == 1) return 1.0 - stage_alarm;
    if (is_full_slot_mode(a, j1, S) && j2 == 1) return 1.0 - full_slot_alarm;
    return 0.0;
  }
  if (switches_on_alarm(a, j1, S) && j2 == landing_mode(a, S)) {
    return stage ? stage_alarm : full_slot_alarm;
  }
  return 0.0;
}

bool feasible(Algorithm a, const SingleRadioState& s1, const SingleRadioState& s2,
              bool same_channel, int S, int B) {
  const int j1 = s1.j;
  const int j2 = s2.j;
  if (s2.b < 0 || s2.b > B) return false;

  if (!same_channel) {
    if (!switches_on_alarm(a, j1, S)) return false;
    if (j2 != landing_mode(a, S)) return false;
    return has_presensing(a) ? buffers_for_full_slot(s1, s2, B) : keeps_transmitting(s1, s2);
  }

  const bool stage = j1 >= 1 && j1 <= S;
  // Idle entry with nothing to send.
  if (j2 == 0) {
    if (s2.f != 0 || s2.b != 0) return false;
    if (j1 == 0 || stage) return s1.b == 0;
    return is_full_slot_mode(a, j1, S) && B == 0;
  }
  // Idle SU with a new frame.
  if (j1 == 0) {
    if (s2.f != 1) return false;
    if (has_presensing(a)) return j2 == S + 2 && s2.b == std::min(s1.b + 1, B);
    return j2 == 1 && s2.b == 0;
  }
  // Stage advance below the last stage.
  if (stage && j1 < S && j2 == j1 + 1) return keeps_transmitting(s1, s2);
  // Last stage into the quiet mode.
  if (has_quiet(a) && j1 == S && j2 == S + 1) return buffers_for_full_slot(s1, s2, B);
  // Any active mode back to stage 1.
  if (j2 == 1) return keeps_transmitting(s1, s2);
  return false;
}

int feasibility(Algorithm a, const SingleRadioState& s1, const SingleRadioState& s2, int S, int B,
                int N) {
  if (s2.c == s1.c && feasible(a, s1, s2, true, S, B)) return 1;
  if (s2.c == next_channel(s1.c, N) && feasible(a, s1, s2, false, S, B)) return 1;
  return 0;
}

namespace {

SingleRadioModel build(const ScenarioConfig& cfg, const EnumerationOptions& opt, bool with_kernel) {
  if (opt.enforce_config_rules) {
    cfg.validate();
  } else {
    ScenarioConfig relaxed = cfg;
    relaxed.B = 0;
    relaxed.validate();
  }
  if (cfg.architecture != Architecture::Single) {
    throw ConfigError("single-radio model requires architecture SINGLE");
  }
  const Algorithm a = cfg.algorithm;
  const int S = cfg.S;
  const int N = cfg.N;
  const int B = cfg.B;
  const ModeSets modes = mode_sets(a, S);
  const detail::PuTable pu(cfg.traffic, N);

  auto successors = [&](const SingleRadioState& s1,
                        std::vector<std::pair<SingleRadioState, double>>& out) {
    const std::uint32_t i1 = s1.I.bits();
    for (std::uint32_t i2 = 0; i2 < pu.patterns(); ++i2) {
      const double p1 = pu(i1, i2);
      if (p1 == 0.0) continue;
      const ChannelOccupancy occ2(N, i2);
      const bool present = occ2.busy(s1.c);
      for (int f2 = 0; f2 <= 1; ++f2) {
        const double p2 = su_traffic_transition_prob(s1.f, f2, cfg.traffic);
        if (p2 == 0.0) continue;
        for (int j2 : modes.gamma) {
          for (bool same : {true, false}) {
            const int c2 = same ? s1.c : next_channel(s1.c, N);
            const double p3 = sensing_outcome_prob(a, s1.j, j2, present, same, cfg.sensing, S);
            if (p3 == 0.0) continue;
            for (int b2 = 0; b2 <= B; ++b2) {
              SingleRadioState s2{occ2, f2, j2, b2, c2};
              if (feasible(a, s1, s2, same, S, B)) out.emplace_back(s2, p1 * p2 * p3);
            }
          }
        }
      }
    }
  };
  auto less = [](const SingleRadioState& x, const SingleRadioState& y) {
    return std::make_tuple(x.c, x.j, x.b, x.f, x.I.bits()) <
           std::make_tuple(y.c, y.j, y.b, y.f, y.I.bits());
  };
  const SingleRadioState initial{ChannelOccupancy(N, 0), 0, 0, 0, 1};
  return detail::reachable_model(initial, successors, less, describe, opt.state_cap, with_kernel);
}

void require_aligned(const SingleRadioModel& model, std::span<const double> pi) {
  if (pi.size() != model.size()) {
    throw InputShapeError("distribution has " + std::to_string(pi.size()) +
                          " entries but the model has " + std::to_string(model.size()) + " states");
  }
}

}  // namespace

SingleRadioModel enumerate_states(const ScenarioConfig& cfg, const EnumerationOptions& opt) {
  return build(cfg, opt, false);
}

SingleRadioModel build_kernel(const ScenarioConfig& cfg, const EnumerationOptions& opt) {
  return build(cfg, opt, true);
}

double throughput(const SingleRadioModel& model, std::span<const double> pi,
                  const ScenarioConfig& cfg) {
  require_aligned(model, pi);
  const auto& t = cfg.traffic;
  double free_mass = 0.0;
  for (std::size_t k = 0; k < model.size(); ++k) {
    const auto& s = model.states[k];
    if (s.j < 1 || s.j > cfg.S) continue;
    free_mass += pi[k] * (s.I.busy(s.c) ? t.p_pd : 1.0 - t.p_pa);
  }
  return cfg.sensing.W * cfg.sensing.transmit_fraction() * free_mass;
}

double collision_rate(const SingleRadioModel& model, std::span<const double> pi,
                      const ScenarioConfig& cfg) {
  require_aligned(model, pi);
  const auto& t = cfg.traffic;
  double g = 0.0;
  for (std::size_t k = 0; k < model.size(); ++k) {
    const auto& s = model.states[k];
    if (s.j < 1 || s.j > cfg.S) continue;
    g += pi[k] * (s.I.busy(s.c) ? 1.0 - t.p_pd : t.p_pa);
  }
  return g;
}

double frame_arrival_rate(const SingleRadioModel& model, std::span<const double> pi) {
  require_aligned(model, pi);
  double mass = 0.0;
  for (std::size_t k = 0; k < model.size(); ++k) {
    if (model.states[k].f == 1) mass += pi[k];
  }
  return mass;
}

}  // namespace mstage
