#include "mstage/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "mstage/parallel_radio.hpp"

namespace mstage {
namespace {

double max_row_error(const Kernel& kernel) {
  double worst = 0.0;
  for (std::int64_t k = 0; k < kernel.rows(); ++k) {
    double sum = 0.0;
    for (Kernel::InnerIterator it(kernel, k); it; ++it) sum += it.value();
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return worst;
}

template <class Model, class Rate, class Collisions, class Arrivals>
MetricsReport evaluate(const ScenarioConfig& cfg, const Model& model, const SolveOptions& solve,
                       Rate rate, Collisions collisions, Arrivals arrivals) {
  const StationaryDistribution dist = solve_stationary(model, solve);
  MetricsReport r;
  r.scenario = cfg;
  r.R = rate(model, dist.pi, cfg);
  r.G = collisions(model, dist.pi, cfg);
  // Delivered frames per slot: throughput with unit rate and no sensing overhead.
  ScenarioConfig unit = cfg;
  unit.sensing.W = 1.0;
  unit.sensing.T_s = 0.0;
  const double delivered = rate(model, dist.pi, unit);
  const double generated = arrivals(model, dist.pi);
  r.delivery_rate = generated > 0.0 ? std::min(1.0, delivered / generated) : 1.0;
  r.state_count = model.size();
  r.residual = dist.residual;
  r.max_row_error = max_row_error(model.kernel);
  r.solver = dist.method;
  return r;
}

}  // namespace

double MetricsReport::normalized_throughput() const {
  const double radios = scenario.architecture == Architecture::Parallel ? scenario.N : 1.0;
  return R / (radios * scenario.sensing.W);
}

MetricsReport analyze(const ScenarioConfig& cfg, const AnalysisOptions& opt) {
  if (cfg.architecture == Architecture::Parallel) {
    const auto model = build_kernel_parallel(cfg, opt.enumeration);
    return evaluate(cfg, model, opt.solve, throughput_parallel, collision_rate_parallel,
                    frame_arrival_rate_parallel);
  }
  const auto model = build_kernel(cfg, opt.enumeration);
  return evaluate(
      cfg, model, opt.solve,
      [](const SingleRadioModel& m, std::span<const double> pi, const ScenarioConfig& c) {
        return throughput(m, pi, c);
      },
      [](const SingleRadioModel& m, std::span<const double> pi, const ScenarioConfig& c) {
        return collision_rate(m, pi, c);
      },
      [](const SingleRadioModel& m, std::span<const double> pi) { return frame_arrival_rate(m, pi); });
}

}  // namespace mstage
