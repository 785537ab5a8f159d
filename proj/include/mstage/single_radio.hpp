#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mstage/core.hpp"
#include "mstage/transition_model.hpp"

namespace mstage {

/// Mode indices of a single-radio algorithm.
///
/// 0 is idle, 1..S are the sensing stages, S+1 is the quiet mode and S+2 the
/// pre-sensing mode (each only when the algorithm has it).
struct ModeSets {
  std::vector<int> gamma;         ///< all valid modes
  std::vector<int> gamma_s;       ///< sensing stages {1..S}
  std::vector<int> gamma_a;       ///< active modes (gamma without idle)
  std::optional<int> quiet;       ///< S+1 when present
  std::optional<int> presensing;  ///< S+2 when present

  bool contains(int j) const;
  bool is_stage(int j) const { return j >= 1 && j <= static_cast<int>(gamma_s.size()); }
};

ModeSets mode_sets(Algorithm a, int S);

struct SingleRadioState {
  ChannelOccupancy I;  ///< PU status during the previous slot
  int f = 0;           ///< SU has a new frame for this slot
  int j = 0;           ///< mode
  int b = 0;           ///< buffer level
  int c = 1;           ///< operating channel, 1-based

  std::uint64_t key() const;
  friend bool operator==(const SingleRadioState&, const SingleRadioState&) = default;
};

/// The channel reached by a switch: c+1, wrapping N back to 1.
inline int next_channel(int c, int N) { return c < N ? c + 1 : 1; }

/// Probability of the sensing outcome that moves mode j1 to j2.
///
/// `pu_present` is the PU status on the operating channel during the slot in
/// which j1 is executed. `same_channel` selects between staying on c1 and
/// switching to the next channel. Transitions not covered by the algorithm's
/// case table have probability 0.
double sensing_outcome_prob(Algorithm a, int j1, int j2, bool pu_present, bool same_channel,
                            const SensingParams& p, int S);

/// Feasibility of s1 -> s2 under one channel relation (stay or switch).
bool feasible(Algorithm a, const SingleRadioState& s1, const SingleRadioState& s2,
              bool same_channel, int S, int B);

/// 1 iff s2 can follow s1 under any channel relation valid for N channels.
int feasibility(Algorithm a, const SingleRadioState& s1, const SingleRadioState& s2, int S, int B,
                int N);

struct EnumerationOptions {
  std::size_t state_cap = 500000;
  /// When false the scenario's algorithm/buffer pairing is not checked, which
  /// lets a bufferless algorithm be built against a nominal B > 0.
  bool enforce_config_rules = true;
};

using SingleRadioModel = TransitionModel<SingleRadioState>;

/// States reachable from the empty system (all channels free, no frame, idle,
/// empty buffer, channel 1), ordered lexicographically on (c, j, b, f, I).
SingleRadioModel enumerate_states(const ScenarioConfig& cfg, const EnumerationOptions& opt = {});

/// Same state set with the full transition kernel. Throws ModelError naming the
/// first row whose sum deviates from 1 by more than 1e-12.
SingleRadioModel build_kernel(const ScenarioConfig& cfg, const EnumerationOptions& opt = {});

/// Average SU throughput [bit/s] for a stationary distribution over `model`.
double throughput(const SingleRadioModel& model, std::span<const double> pi,
                  const ScenarioConfig& cfg);

/// Expected SU/PU collisions per slot.
double collision_rate(const SingleRadioModel& model, std::span<const double> pi,
                      const ScenarioConfig& cfg);

/// Expected new frames per slot (stationary mass with f = 1).
double frame_arrival_rate(const SingleRadioModel& model, std::span<const double> pi);

}  // namespace mstage
