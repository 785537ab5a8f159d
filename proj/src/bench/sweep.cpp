#include "mstage/bench/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "mstage/detector.hpp"
#include "mstage/errors.hpp"

namespace mstage::bench {
namespace {

void set_axis(ScenarioConfig& c, const std::string& name, const std::string& value) {
  try {
    if (name == "S") c.S = std::stoi(value);
    else if (name == "B") c.B = std::stoi(value);
    else if (name == "N") {
      c.N = std::stoi(value);
      if (c.architecture == Architecture::Parallel) c.M = c.N;
    } else if (name == "T_s") c.sensing.T_s = std::stod(value);
    else if (name == "algorithm") {
      c.algorithm = parse_algorithm(value);
      if (c.algorithm == Algorithm::Parallel) {
        c.architecture = Architecture::Parallel;
        c.M = c.N;
      } else {
        c.architecture = Architecture::Single;
        c.M = 1;
      }
    }
  } catch (const std::logic_error&) {
    throw ConfigError("sweep axis '" + name + "' has a malformed value '" + value + "'");
  }
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string describe(const ScenarioConfig& c) {
  return std::string(to_string(c.algorithm)) + " S=" + std::to_string(c.S) + " N=" + std::to_string(c.N) +
         " B=" + std::to_string(c.B) + " T_s=" + num(c.sensing.T_s);
}

}  // namespace

std::vector<SweepPoint> expand(const SweepSpec& spec) {
  spec.validate();
  std::vector<SweepPoint> points;
  std::vector<std::size_t> idx(spec.axes.size(), 0);
  while (true) {
    SweepPoint p;
    p.scenario = spec.base;
    for (std::size_t a = 0; a < spec.axes.size(); ++a)
      set_axis(p.scenario, spec.axes[a].name, spec.axes[a].values[idx[a]]);

    SensingParams& s = p.scenario.sensing;
    if (spec.rules.recalibrate != Recalibrate::Off) {
      const Calibration cal = calibrate_threshold(spec.detector.snr, spec.detector.bandwidth, s.T_s, s.p_ms);
      s.p_fs = cal.p_f;
      if (spec.rules.recalibrate == Recalibrate::Full) {
        const RocPoint full = full_slot_rates(spec.detector.snr, spec.detector.bandwidth, s.T_s, s.T, s.p_ms);
        s.p_ft = full.p_f;
        s.p_mt = full.p_m;
      }
    }
    if (spec.rules.generated_throughput) {
      const double p_sd = p_sd_for_generated(*spec.rules.generated_throughput, p.scenario.traffic.p_sa, s);
      if (p_sd < 0.0 || p_sd > 1.0) {
        p.feasible = false;
        p.note = "generated throughput target unreachable (p_sd = " + num(p_sd) + ")";
      } else {
        p.scenario.traffic.p_sd = p_sd;
      }
    }
    if (p.feasible) {
      try {
        p.scenario.validate();
      } catch (const ConfigError& e) {
        throw ConfigError("sweep point " + describe(p.scenario) + ": " + e.what());
      }
    }
    points.push_back(std::move(p));

    std::size_t a = spec.axes.size();
    while (a > 0) {
      --a;
      if (++idx[a] < spec.axes[a].values.size()) break;
      idx[a] = 0;
      if (a == 0) return points;
    }
    if (spec.axes.empty()) return points;
  }
}

double ResultRow::normalized_R() const {
  if (!analytic) return std::nan("");
  return analytic->normalized_throughput();
}

double ResultRow::normalized_G() const {
  if (!analytic) return std::nan("");
  const double radios = scenario.architecture == Architecture::Parallel ? scenario.N : 1.0;
  return analytic->G / radios;
}

bool ResultRow::ok() const {
  if (status == "error") return false;
  if (!bound_ok) return false;
  if (comparison && !comparison->pass) return false;
  return true;
}

std::vector<ResultRow> run_sweep(const SweepSpec& spec, const SweepOptions& opt) {
  const std::vector<SweepPoint> points = expand(spec);
  std::vector<ResultRow> rows;
  rows.reserve(points.size());
  for (const SweepPoint& p : points) {
    ResultRow row;
    row.scenario = p.scenario;
    if (!p.feasible) {
      row.status = "infeasible";
      row.note = p.note;
      rows.push_back(std::move(row));
      continue;
    }
    try {
      row.upper_bound = throughput_upper_bound(p.scenario);
      if (opt.analytic) {
        row.analytic = analyze(p.scenario, opt.analysis);
        row.bound_ok = row.analytic->R <= row.upper_bound + 1e-9;
        row.qos_ok = 1.0 - row.analytic->delivery_rate <= opt.qos_max_unsuccessful;
      }
      if (opt.simulate) {
        SimConfig sc;
        sc.scenario = p.scenario;
        sc.slots = opt.sim.slots;
        sc.warmup = opt.sim.warmup;
        sc.seed = opt.sim.seed;
        sc.replications = opt.sim.replications;
        row.sim = simulate(sc);
        if (!opt.analytic) row.qos_ok = 1.0 - row.sim->delivery_rate <= opt.qos_max_unsuccessful;
        if (row.analytic) row.comparison = compare(*row.analytic, *row.sim);
      }
    } catch (const Error& e) {
      row.status = "error";
      row.note = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ResultRow> qos_filter(const std::vector<ResultRow>& rows, double max_unsuccessful) {
  std::vector<ResultRow> kept;
  for (const ResultRow& r : rows) {
    double delivery = std::nan("");
    if (r.analytic) delivery = r.analytic->delivery_rate;
    else if (r.sim) delivery = r.sim->delivery_rate;
    if (!std::isnan(delivery) && 1.0 - delivery <= max_unsuccessful) kept.push_back(r);
  }
  return kept;
}

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << "algorithm,architecture,S,N,M,B,p_pa,p_pd,p_sa,p_sd,p_fs,p_ms,p_ft,p_mt,T,T_s,W,"
         "status,state_count,solve_residual,upper_bound,R_analytic,G_analytic,delivery_analytic,"
         "R_normalized,G_normalized,R_sim,R_se,G_sim,G_se,delivery_sim,delivery_se,sim_pass,qos_ok\n";
  auto opt_num = [](bool have, double v) { return have ? num(v) : std::string(); };
  for (const ResultRow& r : rows) {
    const ScenarioConfig& c = r.scenario;
    const TrafficParams& t = c.traffic;
    const SensingParams& s = c.sensing;
    const bool a = r.analytic.has_value();
    const bool m = r.sim.has_value();
    out << to_string(c.algorithm) << ',' << to_string(c.architecture) << ',' << c.S << ',' << c.N << ','
        << c.M << ',' << c.B << ',' << num(t.p_pa) << ',' << num(t.p_pd) << ',' << num(t.p_sa) << ','
        << num(t.p_sd) << ',' << num(s.p_fs) << ',' << num(s.p_ms) << ',' << num(s.p_ft) << ','
        << num(s.p_mt) << ',' << num(s.T) << ',' << num(s.T_s) << ',' << num(s.W) << ',' << r.status << ','
        << (a ? std::to_string(r.analytic->state_count) : std::string()) << ','
        << opt_num(a, a ? r.analytic->residual : 0.0) << ',' << opt_num(r.status == "ok", r.upper_bound)
        << ',' << opt_num(a, a ? r.analytic->R : 0.0) << ',' << opt_num(a, a ? r.analytic->G : 0.0) << ','
        << opt_num(a, a ? r.analytic->delivery_rate : 0.0) << ',' << opt_num(a, r.normalized_R()) << ','
        << opt_num(a, r.normalized_G()) << ',' << opt_num(m, m ? r.sim->R : 0.0) << ','
        << opt_num(m, m ? r.sim->R_se : 0.0) << ',' << opt_num(m, m ? r.sim->G : 0.0) << ','
        << opt_num(m, m ? r.sim->G_se : 0.0) << ',' << opt_num(m, m ? r.sim->delivery_rate : 0.0) << ','
        << opt_num(m, m ? r.sim->delivery_se : 0.0) << ','
        << (r.comparison ? (r.comparison->pass ? "true" : "false") : "") << ','
        << (r.status == "ok" ? (r.qos_ok ? "true" : "false") : "") << '\n';
  }
}

}  // namespace mstage::bench
