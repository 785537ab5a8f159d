#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "mstage/core.hpp"
#include "mstage/single_radio.hpp"
#include "mstage/transition_model.hpp"

namespace mstage {

inline constexpr int kMaxRadios = 8;

/// State of M parallel radios; radio m is bound to channel m.
///
/// Modes per radio: 0 idle, 1..S sensing stages, S+1 quiet.
struct ParallelRadioState {
  ChannelOccupancy I;   ///< previous-slot PU status, one entry per channel/radio
  std::uint32_t F = 0;  ///< bit m-1 set: a frame was generated in division m of the previous slot
  std::array<std::uint8_t, kMaxRadios> J{};  ///< J[m-1] is the mode of radio m
  int b = 0;            ///< buffer level after this slot's dispatch

  int radios() const { return I.size(); }
  int frame(int m) const { return static_cast<int>((F >> (m - 1)) & 1U); }
  int mode(int m) const { return J[static_cast<std::size_t>(m - 1)]; }
  void set_mode(int m, int j) { J[static_cast<std::size_t>(m - 1)] = static_cast<std::uint8_t>(j); }

  std::uint64_t key() const;
  friend bool operator==(const ParallelRadioState&, const ParallelRadioState&) = default;
};

/// Disjoint radio index sets (1-based, ascending).
struct RadioSets {
  std::vector<int> active;
  std::vector<int> idle;
  std::vector<int> quiet;
};

struct FrameAccounting {
  int F_N = 0;  ///< frames generated during the previous slot
  int F_T = 0;  ///< frames available: buffered + generated
  int M_F = 0;  ///< radios not in the quiet mode
  int M_A = 0;  ///< radios that transmit
  RadioSets sets;
  int b_next = 0;  ///< buffer level after dispatch
};

/// Dispatch of the frames available at `state` given the previous buffer level.
FrameAccounting frame_accounting(const ParallelRadioState& state, int b_prev,
                                 const ScenarioConfig& cfg);

/// Radio sets read off the modes alone (stage -> active, 0 -> idle, S+1 -> quiet).
RadioSets radio_sets(const ParallelRadioState& state, int S);

/// Chained per-division frame process across a slot boundary.
double su_traffic_prob_parallel(std::uint32_t F1, std::uint32_t F2, int M, const TrafficParams& t);

/// Per-radio sensing factor. `set` is the radio's membership in state 1.
enum class RadioRole { Active, Quiet, Idle };
double radio_sensing_factor(RadioRole set, int j1, int j2, bool pu_present, const SensingParams& p,
                            int S);

/// Product of the per-radio factors over the sets of state 1.
double sensing_outcome_prob_parallel(const ParallelRadioState& s1, const ParallelRadioState& s2,
                                     const RadioSets& sets1, const SensingParams& p, int S);

/// 1 iff s2's buffer and mode assignment agree with its frame accounting
/// against s1's buffer level.
int feasibility_parallel(const ParallelRadioState& s1, const ParallelRadioState& s2,
                         const ScenarioConfig& cfg);

using ParallelRadioModel = TransitionModel<ParallelRadioState>;

/// Reachable closure from the empty system (no PU, no frames, all radios idle,
/// empty buffer), ordered lexicographically on (J, b, F, I).
ParallelRadioModel enumerate_states_parallel(const ScenarioConfig& cfg,
                                             const EnumerationOptions& opt = {});
ParallelRadioModel build_kernel_parallel(const ScenarioConfig& cfg,
                                         const EnumerationOptions& opt = {});

double throughput_parallel(const ParallelRadioModel& model, std::span<const double> pi,
                           const ScenarioConfig& cfg);
double collision_rate_parallel(const ParallelRadioModel& model, std::span<const double> pi,
                               const ScenarioConfig& cfg);
/// Expected frames generated per slot.
double frame_arrival_rate_parallel(const ParallelRadioModel& model, std::span<const double> pi);

}  // namespace mstage
