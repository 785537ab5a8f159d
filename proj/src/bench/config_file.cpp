#include "mstage/bench/config_file.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "mstage/errors.hpp"

namespace mstage::bench {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct Entry {
  std::string value;
  int line;
};

double to_double(const std::string& key, const Entry& e) {
  double v = 0.0;
  const char* end = e.value.data() + e.value.size();
  auto [ptr, ec] = std::from_chars(e.value.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw UsageError("line " + std::to_string(e.line) + ": key '" + key + "' expects a number, got '" +
                         e.value + "'",
                     e.line);
  return v;
}

template <class Int>
Int to_int(const std::string& key, const Entry& e) {
  Int v = 0;
  const char* end = e.value.data() + e.value.size();
  auto [ptr, ec] = std::from_chars(e.value.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw UsageError("line " + std::to_string(e.line) + ": key '" + key + "' expects an integer, got '" +
                         e.value + "'",
                     e.line);
  return v;
}

bool to_bool(const std::string& key, const Entry& e) {
  if (e.value == "true" || e.value == "on" || e.value == "1" || e.value == "yes") return true;
  if (e.value == "false" || e.value == "off" || e.value == "0" || e.value == "no") return false;
  throw UsageError("line " + std::to_string(e.line) + ": key '" + key + "' expects true/false", e.line);
}

const std::set<std::string> kAxes = {"S", "T_s", "B", "N", "algorithm"};

}  // namespace

void SweepSpec::validate() const {
  for (const SweepAxis& a : axes) {
    if (!kAxes.count(a.name)) throw ConfigError("sweep axis '" + a.name + "' is not one of S, T_s, B, N, algorithm");
    if (a.values.empty()) throw ConfigError("sweep axis '" + a.name + "' has no values");
  }
  if (rules.generated_throughput && !(*rules.generated_throughput > 0.0))
    throw ConfigError("rule.generated_throughput must be positive");
  if (rules.generated_throughput && base.traffic.p_sa <= 0.0)
    throw ConfigError("rule.generated_throughput requires traffic.p_sa > 0");
  if (rules.recalibrate != Recalibrate::Off && !(base.sensing.p_ms > 0.0 && base.sensing.p_ms < 1.0))
    throw ConfigError("rule.recalibrate requires sensing.p_ms in (0, 1)");
}

RunConfig parse_config(std::istream& in) {
  std::map<std::string, Entry> top, sweep;
  std::vector<std::string> axis_order;
  std::map<std::string, Entry>* section = &top;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text == "[sweep]") {
        section = &sweep;
        continue;
      }
      throw UsageError("line " + std::to_string(line) + ": unknown section " + text, line);
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos)
      throw UsageError("line " + std::to_string(line) + ": expected 'key = value'", line);
    std::string key = trim(text.substr(0, eq));
    std::string value = trim(text.substr(eq + 1));
    if (key.empty() || value.empty())
      throw UsageError("line " + std::to_string(line) + ": empty key or value", line);
    if (section->count(key))
      throw UsageError("line " + std::to_string(line) + ": duplicate key '" + key + "'", line);
    if (section == &sweep && kAxes.count(key)) axis_order.push_back(key);
    section->emplace(key, Entry{value, line});
  }

  RunConfig rc;
  ScenarioConfig& sc = rc.sweep.base;
  TrafficParams& t = sc.traffic;
  SensingParams& s = sc.sensing;
  bool have_M = false, have_algorithm = false;

  using Setter = std::function<void(const std::string&, const Entry&)>;
  const std::map<std::string, Setter> setters = {
      {"traffic.p_pa", [&](auto& k, auto& e) { t.p_pa = to_double(k, e); }},
      {"traffic.p_pd", [&](auto& k, auto& e) { t.p_pd = to_double(k, e); }},
      {"traffic.p_sa", [&](auto& k, auto& e) { t.p_sa = to_double(k, e); }},
      {"traffic.p_sd", [&](auto& k, auto& e) { t.p_sd = to_double(k, e); }},
      {"sensing.p_fs", [&](auto& k, auto& e) { s.p_fs = to_double(k, e); }},
      {"sensing.p_ms", [&](auto& k, auto& e) { s.p_ms = to_double(k, e); }},
      {"sensing.p_ft", [&](auto& k, auto& e) { s.p_ft = to_double(k, e); }},
      {"sensing.p_mt", [&](auto& k, auto& e) { s.p_mt = to_double(k, e); }},
      {"sensing.T", [&](auto& k, auto& e) { s.T = s.T_t = to_double(k, e); }},
      {"sensing.T_s", [&](auto& k, auto& e) { s.T_s = to_double(k, e); }},
      {"sensing.W", [&](auto& k, auto& e) { s.W = to_double(k, e); }},
      {"scenario.S", [&](auto& k, auto& e) { sc.S = to_int<int>(k, e); }},
      {"scenario.N", [&](auto& k, auto& e) { sc.N = to_int<int>(k, e); }},
      {"scenario.M", [&](auto& k, auto& e) { sc.M = to_int<int>(k, e); have_M = true; }},
      {"scenario.B", [&](auto& k, auto& e) { sc.B = to_int<int>(k, e); }},
      {"scenario.algorithm",
       [&](auto&, auto& e) {
         sc.algorithm = parse_algorithm(e.value);
         have_algorithm = true;
       }},
      {"scenario.architecture", [&](auto&, auto& e) { sc.architecture = parse_architecture(e.value); }},
      {"detector.snr", [&](auto& k, auto& e) { rc.sweep.detector.snr = to_double(k, e); }},
      {"detector.bandwidth", [&](auto& k, auto& e) { rc.sweep.detector.bandwidth = to_double(k, e); }},
      {"sim.enabled", [&](auto& k, auto& e) { rc.sim.enabled = to_bool(k, e); }},
      {"sim.slots", [&](auto& k, auto& e) { rc.sim.slots = to_int<std::int64_t>(k, e); }},
      {"sim.warmup", [&](auto& k, auto& e) { rc.sim.warmup = to_int<std::int64_t>(k, e); }},
      {"sim.seed", [&](auto& k, auto& e) { rc.sim.seed = to_int<std::uint64_t>(k, e); }},
      {"sim.replications", [&](auto& k, auto& e) { rc.sim.replications = to_int<int>(k, e); }},
      {"qos.max_unsuccessful", [&](auto& k, auto& e) { rc.qos_max_unsuccessful = to_double(k, e); }},
  };

  auto apply = [](const std::string& key, const Entry& e, auto&& fn) {
    try {
      fn();
    } catch (const UsageError&) {
      throw;
    } catch (const Error& err) {
      throw UsageError("line " + std::to_string(e.line) + ": key '" + key + "': " + err.what(), e.line);
    }
  };

  for (const auto& [key, e] : top) {
    auto it = setters.find(key);
    if (it == setters.end())
      throw UsageError("line " + std::to_string(e.line) + ": unknown key '" + key + "'", e.line);
    apply(key, e, [&] { it->second(key, e); });
  }

  if (sc.architecture == Architecture::Parallel) {
    if (!have_algorithm) sc.algorithm = Algorithm::Parallel;
    if (!have_M) sc.M = sc.N;
  }

  for (const auto& [key, e] : sweep) {
    if (kAxes.count(key)) continue;
    if (key == "rule.recalibrate") {
      if (e.value == "off") rc.sweep.rules.recalibrate = Recalibrate::Off;
      else if (e.value == "stage") rc.sweep.rules.recalibrate = Recalibrate::Stage;
      else if (e.value == "full") rc.sweep.rules.recalibrate = Recalibrate::Full;
      else throw UsageError("line " + std::to_string(e.line) + ": rule.recalibrate expects off, stage or full", e.line);
    } else if (key == "rule.generated_throughput") {
      rc.sweep.rules.generated_throughput = to_double(key, e);
    } else {
      throw UsageError("line " + std::to_string(e.line) + ": unknown sweep key '" + key + "'", e.line);
    }
  }
  std::sort(axis_order.begin(), axis_order.end(),
            [&](const std::string& a, const std::string& b) { return sweep.at(a).line < sweep.at(b).line; });
  for (const std::string& name : axis_order) {
    const Entry& e = sweep.at(name);
    SweepAxis axis{name, split_list(e.value)};
    if (axis.values.empty())
      throw UsageError("line " + std::to_string(e.line) + ": sweep axis '" + name + "' has no values", e.line);
    rc.sweep.axes.push_back(std::move(axis));
  }
  return rc;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  return parse_config(in);
}

}  // namespace mstage::bench
