#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>

namespace mstage {

/// Largest channel (and radio) count supported by the packed state encodings.
inline constexpr int kMaxChannels = 16;

enum class Algorithm { P0Q0, P0Q1, P1Q0, P1Q1, Parallel };
enum class Architecture { Single, Parallel };

std::string_view to_string(Algorithm a);
std::string_view to_string(Architecture a);
Algorithm parse_algorithm(std::string_view name);
Architecture parse_architecture(std::string_view name);

/// Per-slot arrival/departure probabilities of the primary (PU) and secondary (SU) traffic.
struct TrafficParams {
  double p_pa = 0.0;  ///< PU arrival per channel per slot
  double p_pd = 0.0;  ///< PU departure
  double p_sa = 0.0;  ///< SU frame arrival
  double p_sd = 0.0;  ///< SU frame departure

  TrafficParams() = default;
  TrafficParams(double p_pa, double p_pd, double p_sa, double p_sd);
  friend bool operator==(const TrafficParams&, const TrafficParams&) = default;
};

/// Detector error rates and slot timing.
///
/// Stage rates (p_fs, p_ms) apply to each of the S sensing stages; the
/// full-slot rates (p_ft, p_mt) apply to the quiet and pre-sensing modes.
struct SensingParams {
  double p_fs = 0.0;
  double p_ms = 0.0;
  double p_ft = 0.0;
  double p_mt = 0.0;
  double T = 1e-3;    ///< slot length [s]
  double T_s = 0.0;   ///< per-stage sensing time [s]
  double T_t = 1e-3;  ///< quiet / pre-sensing time [s], always equal to T
  double W = 1e6;     ///< channel throughput [bit/s]

  SensingParams() = default;
  SensingParams(double p_fs, double p_ms, double p_ft, double p_mt, double T,
                double T_s, double W);

  friend bool operator==(const SensingParams&, const SensingParams&) = default;

  /// Fraction of a sensing-stage slot left for transmission.
  double transmit_fraction() const { return (T - T_s) / T; }
};

struct ScenarioConfig {
  TrafficParams traffic;
  SensingParams sensing;
  int S = 1;  ///< sensing stages
  int N = 1;  ///< PU channels
  int M = 1;  ///< radios (parallel architecture: M == N)
  int B = 0;  ///< buffer capacity in frames
  Algorithm algorithm = Algorithm::P0Q0;
  Architecture architecture = Architecture::Single;

  /// Throws ConfigError naming the violated rule.
  void validate() const;
  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Previous-slot PU status, one bit per channel; bit x is channel x+1.
class ChannelOccupancy {
 public:
  ChannelOccupancy() = default;
  ChannelOccupancy(int size, std::uint32_t bits);
  ChannelOccupancy(std::initializer_list<int> flags);

  int size() const { return size_; }
  std::uint32_t bits() const { return bits_; }
  /// Status of the 1-based channel `channel`.
  bool busy(int channel) const { return (bits_ >> (channel - 1)) & 1U; }
  int busy_count() const;

  friend bool operator==(const ChannelOccupancy&, const ChannelOccupancy&) = default;

 private:
  int size_ = 0;
  std::uint32_t bits_ = 0;
};

/// Probability of the PU status moving from `from` to `to` in one slot.
double pu_transition_prob(const ChannelOccupancy& from, const ChannelOccupancy& to,
                          const TrafficParams& t);

/// Same product evaluated directly on packed masks of `n` channels.
double pu_transition_prob(std::uint32_t from, std::uint32_t to, int n, const TrafficParams& t);

/// Two-state SU frame chain: probability of f1 -> f2.
double su_traffic_transition_prob(int f1, int f2, const TrafficParams& t);

/// Stationary per-channel PU busy probability p_pa / (p_pa + p_pd).
double steady_state_occupancy(const TrafficParams& t);

/// Throughput ceiling for the scenario's architecture [bit/s].
///
/// Single radio: (1 - occ^N) W, the chance that at least one channel is free.
/// Parallel radios: N (1 - occ) W, each radio bound to its own channel.
double throughput_upper_bound(const ScenarioConfig& cfg);

}  // namespace mstage
