#include "mstage/core.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include "mstage/errors.hpp"

namespace mstage {
namespace {

void require_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    std::ostringstream os;
    os << name << " must lie in [0,1], got " << p;
    throw ConfigError(os.str());
  }
}

}  // namespace

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::P0Q0: return "P0Q0";
    case Algorithm::P0Q1: return "P0Q1";
    case Algorithm::P1Q0: return "P1Q0";
    case Algorithm::P1Q1: return "P1Q1";
    case Algorithm::Parallel: return "PARALLEL";
  }
  return "?";
}

std::string_view to_string(Architecture a) {
  return a == Architecture::Single ? "SINGLE" : "PARALLEL";
}

Algorithm parse_algorithm(std::string_view name) {
  for (auto a : {Algorithm::P0Q0, Algorithm::P0Q1, Algorithm::P1Q0, Algorithm::P1Q1,
                 Algorithm::Parallel}) {
    if (name == to_string(a)) return a;
  }
  throw ConfigError("unknown algorithm '" + std::string(name) +
                    "' (expected P0Q0, P0Q1, P1Q0, P1Q1 or PARALLEL)");
}

Architecture parse_architecture(std::string_view name) {
  if (name == "SINGLE") return Architecture::Single;
  if (name == "PARALLEL") return Architecture::Parallel;
  throw ConfigError("unknown architecture '" + std::string(name) +
                    "' (expected SINGLE or PARALLEL)");
}

TrafficParams::TrafficParams(double pa, double pd, double sa, double sd)
    : p_pa(pa), p_pd(pd), p_sa(sa), p_sd(sd) {
  require_probability(p_pa, "traffic.p_pa");
  require_probability(p_pd, "traffic.p_pd");
  require_probability(p_sa, "traffic.p_sa");
  require_probability(p_sd, "traffic.p_sd");
}

SensingParams::SensingParams(double fs, double ms, double ft, double mt, double slot,
                             double sense, double rate)
    : p_fs(fs), p_ms(ms), p_ft(ft), p_mt(mt), T(slot), T_s(sense), T_t(slot), W(rate) {
  require_probability(p_fs, "sensing.p_fs");
  require_probability(p_ms, "sensing.p_ms");
  require_probability(p_ft, "sensing.p_ft");
  require_probability(p_mt, "sensing.p_mt");
  if (!(T > 0.0)) throw ConfigError("sensing.T must be positive");
  if (!(T_s >= 0.0 && T_s < T)) throw ConfigError("sensing.T_s must satisfy 0 <= T_s < T");
  if (!(W >= 0.0)) throw ConfigError("sensing.W must be non-negative");
}

void ScenarioConfig::validate() const {
  // Re-run the parameter checks: aggregates may have been filled field by field.
  TrafficParams(traffic.p_pa, traffic.p_pd, traffic.p_sa, traffic.p_sd);
  SensingParams(sensing.p_fs, sensing.p_ms, sensing.p_ft, sensing.p_mt, sensing.T,
                sensing.T_s, sensing.W);
  if (sensing.T_t != sensing.T) throw ConfigError("sensing.T_t must equal sensing.T");
  if (S < 1) throw ConfigError("S must be >= 1");
  if (S > 14) throw ConfigError("S must be <= 14 (mode index packing)");
  if (N < 1 || N > kMaxChannels) {
    throw ConfigError("N must be in [1, " + std::to_string(kMaxChannels) + "]");
  }
  if (B < 0 || B > 255) throw ConfigError("B must be in [0, 255]");
  if (architecture == Architecture::Parallel) {
    if (algorithm != Algorithm::Parallel) {
      throw ConfigError("architecture PARALLEL requires algorithm PARALLEL");
    }
    if (M != N) throw ConfigError("architecture PARALLEL requires M == N");
    if (M > 8) throw ConfigError("parallel architecture supports at most 8 radios");
  } else {
    if (algorithm == Algorithm::Parallel) {
      throw ConfigError("algorithm PARALLEL requires architecture PARALLEL");
    }
    if (M != 1) throw ConfigError("architecture SINGLE requires M == 1");
  }
  if (algorithm == Algorithm::P0Q0 && B != 0) {
    throw ConfigError("algorithm P0Q0 has no buffer: B must be 0");
  }
}

ChannelOccupancy::ChannelOccupancy(int size, std::uint32_t bits) : size_(size), bits_(bits) {
  if (size < 0 || size > kMaxChannels) throw InputShapeError("channel count out of range");
  if (size < 32 && (bits >> size) != 0) throw InputShapeError("occupancy bits exceed channel count");
}

ChannelOccupancy::ChannelOccupancy(std::initializer_list<int> flags)
    : size_(static_cast<int>(flags.size())) {
  if (size_ > kMaxChannels) throw InputShapeError("channel count out of range");
  int x = 0;
  for (int v : flags) {
    if (v != 0 && v != 1) throw InputShapeError("occupancy entries must be 0 or 1");
    bits_ |= static_cast<std::uint32_t>(v) << x++;
  }
}

int ChannelOccupancy::busy_count() const { return std::popcount(bits_); }

double pu_transition_prob(std::uint32_t from, std::uint32_t to, int n, const TrafficParams& t) {
  const std::uint32_t all = n >= 32 ? ~0U : ((1U << n) - 1U);
  const int arrivals = std::popcount(~from & to & all);
  const int stay_free = std::popcount(~from & ~to & all);
  const int departures = std::popcount(from & ~to & all);
  const int stay_busy = std::popcount(from & to & all);
  return std::pow(t.p_pa, arrivals) * std::pow(1.0 - t.p_pa, stay_free) *
         std::pow(t.p_pd, departures) * std::pow(1.0 - t.p_pd, stay_busy);
}

double pu_transition_prob(const ChannelOccupancy& from, const ChannelOccupancy& to,
                          const TrafficParams& t) {
  if (from.size() != to.size()) {
    throw InputShapeError("occupancy vectors differ in length (" + std::to_string(from.size()) +
                          " vs " + std::to_string(to.size()) + ")");
  }
  return pu_transition_prob(from.bits(), to.bits(), from.size(), t);
}

double su_traffic_transition_prob(int f1, int f2, const TrafficParams& t) {
  if (f1 == 0) return f2 == 0 ? 1.0 - t.p_sa : t.p_sa;
  return f2 == 0 ? t.p_sd : 1.0 - t.p_sd;
}

double steady_state_occupancy(const TrafficParams& t) {
  const double total = t.p_pa + t.p_pd;
  if (total <= 0.0) throw ConfigError("PU occupancy undefined when p_pa = p_pd = 0");
  return t.p_pa / total;
}

double throughput_upper_bound(const ScenarioConfig& cfg) {
  const double occ = steady_state_occupancy(cfg.traffic);
  if (cfg.architecture == Architecture::Parallel) {
    return cfg.N * (1.0 - occ) * cfg.sensing.W;
  }
  return (1.0 - std::pow(occ, cfg.N)) * cfg.sensing.W;
}

}  // namespace mstage
