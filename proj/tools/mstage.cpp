#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "mstage/bench/claims.hpp"
#include "mstage/bench/config_file.hpp"
#include "mstage/bench/sweep.hpp"
#include "mstage/errors.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

struct Flags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> slots;
  bool no_sim = false;
  bool quiet = false;
  std::vector<int> only;
};

int write_rows(const std::vector<mstage::bench::ResultRow>& rows, const Flags& f) {
  if (f.out.empty() || f.out == "-") {
    mstage::bench::write_csv(std::cout, rows);
  } else {
    std::ofstream out(f.out, std::ios::binary);
    if (!out) throw mstage::UsageError("cannot write '" + f.out + "'");
    mstage::bench::write_csv(out, rows);
  }
  int bad = 0;
  for (const auto& r : rows) {
    if (r.ok()) continue;
    ++bad;
    if (!f.quiet) {
      std::cerr << "FAIL " << to_string(r.scenario.algorithm) << " S=" << r.scenario.S << " N=" << r.scenario.N
                << " B=" << r.scenario.B << " T_s=" << r.scenario.sensing.T_s << ": "
                << (r.note.empty() ? (r.bound_ok ? "analytic/simulation mismatch" : "R above upper bound") : r.note)
                << '\n';
    }
  }
  if (!f.quiet) std::cerr << rows.size() << " rows, " << bad << " failed\n";
  return bad ? kFailed : kOk;
}

int run_config(const Flags& f, bool analytic, bool simulate) {
  mstage::bench::RunConfig rc = mstage::bench::load_config(f.config);
  if (f.seed) rc.sim.seed = *f.seed;
  if (f.slots) rc.sim.slots = *f.slots;
  mstage::bench::SweepOptions opt;
  opt.analytic = analytic;
  opt.simulate = simulate && rc.sim.enabled && !f.no_sim;
  opt.sim = rc.sim;
  opt.qos_max_unsuccessful = rc.qos_max_unsuccessful;
  // Bad simulation settings are configuration errors, caught before any work.
  if (opt.simulate && (opt.sim.warmup < 0 || opt.sim.warmup >= opt.sim.slots || opt.sim.replications < 1))
    throw mstage::ConfigError("simulation needs slots > warmup >= 0 and replications >= 1");
  if (!analytic && !opt.simulate) throw mstage::ConfigError("simulation is disabled for this config");
  return write_rows(mstage::bench::run_sweep(rc.sweep, opt), f);
}

int run_verify(const Flags& f) {
  mstage::bench::ClaimOptions opt;
  opt.simulate = !f.no_sim;
  if (f.seed) opt.seed = *f.seed;
  if (f.slots) opt.slots = *f.slots;
  opt.only = f.only;
  if (!f.quiet) opt.on_progress = [](const std::string& msg) { std::cerr << "  .. " << msg << '\r' << std::flush; };
  int failed = 0;
  opt.on_result = [&](const mstage::bench::ClaimResult& r) {
    failed += !r.pass;
    if (!f.quiet) std::cerr << std::string(80, ' ') << '\r';
    std::cout << (r.pass ? "PASS" : "FAIL") << " [" << r.id << "] " << r.name << ": " << r.computed
              << " | expected " << r.expected;
    if (!r.note.empty()) std::cout << " | " << r.note;
    std::cout << std::endl;
  };
  mstage::bench::reproduce_claims(opt);
  return failed ? kFailed : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-stage spectrum sensing: exact Markov analysis and Monte Carlo harness"};
  app.require_subcommand(1);
  Flags f;

  auto add_common = [&](CLI::App* cmd, bool needs_config) {
    if (needs_config) cmd->add_option("--config", f.config, "Scenario/sweep config file")->required();
    cmd->add_flag("--quiet", f.quiet, "Only emit results");
  };
  auto add_sim = [&](CLI::App* cmd) {
    cmd->add_option("--seed", f.seed, "Base RNG seed");
    cmd->add_option("--slots", f.slots, "Slots per replication, warmup included")->check(CLI::PositiveNumber);
  };

  auto* analyze = app.add_subcommand("analyze", "Exact chain only; CSV rows");
  add_common(analyze, true);
  analyze->add_option("--out", f.out, "CSV output path (default stdout)");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo only; CSV rows");
  add_common(simulate, true);
  add_sim(simulate);
  simulate->add_option("--out", f.out, "CSV output path (default stdout)");

  auto* sweep = app.add_subcommand("sweep", "Exact chain and simulation for every sweep point");
  add_common(sweep, true);
  add_sim(sweep);
  sweep->add_option("--out", f.out, "CSV output path (default stdout)");
  sweep->add_flag("--no-sim", f.no_sim, "Skip the Monte Carlo comparison");

  auto* verify = app.add_subcommand("verify", "Reproduce the quantitative claims");
  add_common(verify, false);
  add_sim(verify);
  verify->add_flag("--no-sim", f.no_sim, "Skip the Monte Carlo agreement claim");
  verify->add_option("--only", f.only, "Claim ids to run")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*analyze) return run_config(f, true, false);
    if (*simulate) return run_config(f, false, true);
    if (*sweep) return run_config(f, true, true);
    return run_verify(f);
  } catch (const mstage::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const mstage::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const mstage::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailed;
  }
}
