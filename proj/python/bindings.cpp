#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mstage/analysis.hpp"
#include "mstage/bench/claims.hpp"
#include "mstage/bench/config_file.hpp"
#include "mstage/bench/presets.hpp"
#include "mstage/bench/sweep.hpp"
#include "mstage/core.hpp"
#include "mstage/detector.hpp"
#include "mstage/errors.hpp"
#include "mstage/simulator.hpp"

namespace py = pybind11;
using namespace mstage;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Multi-stage spectrum sensing: exact chains, Monte Carlo and detector";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base);
  py::register_exception<CapacityError>(m, "CapacityError", base);
  auto model = py::register_exception<ModelError>(m, "ModelError", base);
  py::register_exception<MultiClassError>(m, "MultiClassError", model);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", base);
  py::register_exception<CalibrationError>(m, "CalibrationError", base);
  py::register_exception<ComparisonError>(m, "ComparisonError", base);
  py::register_exception<UsageError>(m, "UsageError", base);
  py::register_exception<InputShapeError>(m, "InputShapeError", base);
  py::register_exception<InvalidModeError>(m, "InvalidModeError", base);

  py::enum_<Algorithm>(m, "Algorithm")
      .value("P0Q0", Algorithm::P0Q0)
      .value("P0Q1", Algorithm::P0Q1)
      .value("P1Q0", Algorithm::P1Q0)
      .value("P1Q1", Algorithm::P1Q1)
      .value("PARALLEL", Algorithm::Parallel);
  py::enum_<Architecture>(m, "Architecture")
      .value("SINGLE", Architecture::Single)
      .value("PARALLEL", Architecture::Parallel);
  py::enum_<Provenance>(m, "Provenance")
      .value("ANALYTIC", Provenance::Analytic)
      .value("SIMULATED", Provenance::Simulated);

  py::class_<TrafficParams>(m, "TrafficParams")
      .def(py::init<>())
      .def(py::init<double, double, double, double>(), py::arg("p_pa"), py::arg("p_pd"), py::arg("p_sa"),
           py::arg("p_sd"))
      .def_readwrite("p_pa", &TrafficParams::p_pa)
      .def_readwrite("p_pd", &TrafficParams::p_pd)
      .def_readwrite("p_sa", &TrafficParams::p_sa)
      .def_readwrite("p_sd", &TrafficParams::p_sd)
      .def(py::self == py::self);

  py::class_<SensingParams>(m, "SensingParams")
      .def(py::init<>())
      .def(py::init<double, double, double, double, double, double, double>(), py::arg("p_fs"),
           py::arg("p_ms"), py::arg("p_ft"), py::arg("p_mt"), py::arg("T") = 1e-3, py::arg("T_s") = 0.0,
           py::arg("W") = 1e6)
      .def_readwrite("p_fs", &SensingParams::p_fs)
      .def_readwrite("p_ms", &SensingParams::p_ms)
      .def_readwrite("p_ft", &SensingParams::p_ft)
      .def_readwrite("p_mt", &SensingParams::p_mt)
      .def_readwrite("T", &SensingParams::T)
      .def_readwrite("T_s", &SensingParams::T_s)
      .def_readwrite("W", &SensingParams::W)
      .def(py::self == py::self);

  py::class_<ScenarioConfig>(m, "ScenarioConfig")
      .def(py::init<>())
      .def_readwrite("traffic", &ScenarioConfig::traffic)
      .def_readwrite("sensing", &ScenarioConfig::sensing)
      .def_readwrite("S", &ScenarioConfig::S)
      .def_readwrite("N", &ScenarioConfig::N)
      .def_readwrite("M", &ScenarioConfig::M)
      .def_readwrite("B", &ScenarioConfig::B)
      .def_readwrite("algorithm", &ScenarioConfig::algorithm)
      .def_readwrite("architecture", &ScenarioConfig::architecture)
      .def("validate", &ScenarioConfig::validate)
      .def(py::self == py::self);

  py::class_<MetricsReport>(m, "MetricsReport")
      .def_readonly("scenario", &MetricsReport::scenario)
      .def_readonly("source", &MetricsReport::source)
      .def_readonly("R", &MetricsReport::R)
      .def_readonly("G", &MetricsReport::G)
      .def_readonly("delivery_rate", &MetricsReport::delivery_rate)
      .def_readonly("R_se", &MetricsReport::R_se)
      .def_readonly("G_se", &MetricsReport::G_se)
      .def_readonly("delivery_se", &MetricsReport::delivery_se)
      .def_readonly("state_count", &MetricsReport::state_count)
      .def_readonly("residual", &MetricsReport::residual)
      .def_readonly("max_row_error", &MetricsReport::max_row_error)
      .def_readonly("solver", &MetricsReport::solver)
      .def("normalized_throughput", &MetricsReport::normalized_throughput);

  m.def("analyze", [](const ScenarioConfig& c) { return analyze(c); }, py::arg("scenario"),
        py::call_guard<py::gil_scoped_release>());
  m.def("throughput_upper_bound", &throughput_upper_bound, py::arg("scenario"));
  m.def("steady_state_occupancy", &steady_state_occupancy, py::arg("traffic"));

  py::class_<SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def(py::init([](const ScenarioConfig& s, std::int64_t slots, std::int64_t warmup, std::uint64_t seed,
                       int replications, int threads) {
             return SimConfig{s, slots, warmup, seed, replications, threads};
           }),
           py::arg("scenario"), py::arg("slots") = 1'000'000, py::arg("warmup") = 10'000, py::arg("seed") = 1,
           py::arg("replications") = 10, py::arg("threads") = 0)
      .def_readwrite("scenario", &SimConfig::scenario)
      .def_readwrite("slots", &SimConfig::slots)
      .def_readwrite("warmup", &SimConfig::warmup)
      .def_readwrite("seed", &SimConfig::seed)
      .def_readwrite("replications", &SimConfig::replications)
      .def_readwrite("threads", &SimConfig::threads);

  py::class_<SimCounts>(m, "SimCounts")
      .def_readonly("slots", &SimCounts::slots)
      .def_readonly("generated", &SimCounts::generated)
      .def_readonly("delivered", &SimCounts::delivered)
      .def_readonly("collided", &SimCounts::collided)
      .def_readonly("dropped", &SimCounts::dropped)
      .def_readonly("buffer_start", &SimCounts::buffer_start)
      .def_readonly("buffer_end", &SimCounts::buffer_end)
      .def("conserved", &SimCounts::conserved);

  py::class_<SimMetrics>(m, "SimMetrics")
      .def_readonly("scenario", &SimMetrics::scenario)
      .def_readonly("replications", &SimMetrics::replications)
      .def_readonly("R", &SimMetrics::R)
      .def_readonly("R_se", &SimMetrics::R_se)
      .def_readonly("G", &SimMetrics::G)
      .def_readonly("G_se", &SimMetrics::G_se)
      .def_readonly("delivery_rate", &SimMetrics::delivery_rate)
      .def_readonly("delivery_se", &SimMetrics::delivery_se)
      .def_readonly("occupancy", &SimMetrics::occupancy)
      .def_readonly("occupancy_se", &SimMetrics::occupancy_se)
      .def_readonly("totals", &SimMetrics::totals)
      .def_readonly("per_replication", &SimMetrics::per_replication)
      .def("report", &SimMetrics::report);

  m.def("simulate", &simulate, py::arg("config"), py::call_guard<py::gil_scoped_release>());

  py::class_<MetricComparison>(m, "MetricComparison")
      .def_readonly("analytic", &MetricComparison::analytic)
      .def_readonly("simulated", &MetricComparison::simulated)
      .def_readonly("se", &MetricComparison::se)
      .def_readonly("z", &MetricComparison::z)
      .def_readonly("rel_error", &MetricComparison::rel_error)
      .def_readonly("within", &MetricComparison::within)
      .def_readonly("margin", &MetricComparison::margin);
  py::class_<Comparison>(m, "Comparison")
      .def_readonly("R", &Comparison::R)
      .def_readonly("G", &Comparison::G)
      .def_readonly("delivery", &Comparison::delivery)
      .def_readonly("passed", &Comparison::pass);
  m.def("compare", &compare, py::arg("analytic"), py::arg("sim"), py::arg("sigmas") = 3.0);

  py::class_<RocPoint>(m, "RocPoint")
      .def_readonly("p_f", &RocPoint::p_f)
      .def_readonly("p_m", &RocPoint::p_m);
  py::class_<Calibration>(m, "Calibration")
      .def_readonly("threshold", &Calibration::threshold)
      .def_readonly("p_f", &Calibration::p_f);
  m.def(
      "roc_point",
      [](double sense_time, double threshold, double snr, double bandwidth) {
        return roc_point(DetectorParams{snr, bandwidth, sense_time, threshold});
      },
      py::arg("sense_time"), py::arg("threshold"), py::arg("snr") = 0.1, py::arg("bandwidth") = 6e6);
  m.def("calibrate_threshold", &calibrate_threshold, py::arg("snr"), py::arg("bandwidth"),
        py::arg("sense_time"), py::arg("p_m_target"));
  m.def("full_slot_rates", &full_slot_rates, py::arg("snr"), py::arg("bandwidth"), py::arg("stage_time"),
        py::arg("slot_time"), py::arg("p_m_target"));

  using namespace mstage::bench;
  py::enum_<PuTraffic>(m, "PuTraffic").value("SLOW", PuTraffic::Slow).value("FAST", PuTraffic::Fast);
  py::enum_<SensingCase>(m, "SensingCase").value("LONG", SensingCase::Long).value("SHORT", SensingCase::Short);
  m.def("single_grid", &single_grid, py::arg("algorithm"), py::arg("traffic"), py::arg("sensing"), py::arg("S"));
  m.def("parallel_grid", &parallel_grid, py::arg("traffic"), py::arg("sensing"), py::arg("S"));

  py::class_<ResultRow>(m, "ResultRow")
      .def_readonly("scenario", &ResultRow::scenario)
      .def_readonly("status", &ResultRow::status)
      .def_readonly("note", &ResultRow::note)
      .def_readonly("analytic", &ResultRow::analytic)
      .def_readonly("sim", &ResultRow::sim)
      .def_readonly("comparison", &ResultRow::comparison)
      .def_readonly("upper_bound", &ResultRow::upper_bound)
      .def_readonly("qos_ok", &ResultRow::qos_ok)
      .def("ok", &ResultRow::ok);
  m.def(
      "run_config",
      [](const std::string& path, bool simulate) {
        const RunConfig rc = load_config(path);
        SweepOptions opt;
        opt.simulate = simulate && rc.sim.enabled;
        opt.sim = rc.sim;
        opt.qos_max_unsuccessful = rc.qos_max_unsuccessful;
        py::gil_scoped_release release;
        return run_sweep(rc.sweep, opt);
      },
      py::arg("path"), py::arg("simulate") = true);

  py::class_<ClaimResult>(m, "ClaimResult")
      .def_readonly("id", &ClaimResult::id)
      .def_readonly("name", &ClaimResult::name)
      .def_readonly("computed", &ClaimResult::computed)
      .def_readonly("expected", &ClaimResult::expected)
      .def_readonly("passed", &ClaimResult::pass)
      .def_readonly("note", &ClaimResult::note);
  m.def(
      "reproduce_claims",
      [](std::vector<int> only, bool simulate, std::int64_t slots, int replications, std::uint64_t seed) {
        ClaimOptions opt;
        opt.only = std::move(only);
        opt.simulate = simulate;
        opt.slots = slots;
        opt.replications = replications;
        opt.seed = seed;
        py::gil_scoped_release release;
        return reproduce_claims(opt);
      },
      py::arg("only") = std::vector<int>{}, py::arg("simulate") = false, py::arg("slots") = 1'000'000,
      py::arg("replications") = 10, py::arg("seed") = 20100);
}
