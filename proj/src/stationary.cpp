#include "mstage/stationary.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>

#include "mstage/errors.hpp"

namespace mstage {
namespace {

using Index = std::int64_t;
using Vec = Eigen::VectorXd;

Vec step(const Kernel& kernel, const Vec& x) { return kernel.transpose() * x; }

double max_abs_diff(const Vec& a, const Vec& b) { return (a - b).cwiseAbs().maxCoeff(); }

// Clamps rounding-level negatives and renormalizes.
void tidy(Vec& x) {
  const double worst = x.minCoeff();
  if (worst < -1e-9) {
    std::ostringstream os;
    os << "stationary solution has a negative entry " << worst;
    throw ModelError(os.str());
  }
  x = x.cwiseMax(0.0);
  x /= x.sum();
}

Vec solve_direct(const Kernel& kernel) {
  const Index n = kernel.rows();
  // (Lambda^T - I) pi = 0 with the first equation replaced by sum(pi) = 1.
  std::vector<Eigen::Triplet<double, int>> triplets;
  triplets.reserve(static_cast<std::size_t>(kernel.nonZeros() + 2 * n));
  for (Index k = 0; k < n; ++k) {
    for (Kernel::InnerIterator it(kernel, k); it; ++it) {
      const Index l = it.col();
      if (l != 0) triplets.emplace_back(static_cast<int>(l), static_cast<int>(k), it.value());
    }
    if (k != 0) triplets.emplace_back(static_cast<int>(k), static_cast<int>(k), -1.0);
    triplets.emplace_back(0, static_cast<int>(k), 1.0);
  }
  Eigen::SparseMatrix<double, Eigen::ColMajor, int> a(n, n);
  a.setFromTriplets(triplets.begin(), triplets.end());
  a.makeCompressed();

  Eigen::SparseLU<Eigen::SparseMatrix<double, Eigen::ColMajor, int>, Eigen::COLAMDOrdering<int>>
      lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success) throw ModelError("sparse LU factorization failed: " + lu.lastErrorMessage());
  Vec rhs = Vec::Zero(n);
  rhs[0] = 1.0;
  Vec x = lu.solve(rhs);
  if (lu.info() != Eigen::Success) throw ModelError("sparse LU solve failed");
  return x;
}

// Repeated multiplication until the residual reaches `target`. Switches to the
// average of successive iterates if the residual stops shrinking, which is
// what a periodic chain does.
Vec solve_power(const Kernel& kernel, Vec x, const SolveOptions& opt, std::size_t& iterations,
                double& residual) {
  constexpr std::size_t kWindow = 200;
  bool averaging = false;
  double checkpoint = std::numeric_limits<double>::infinity();
  residual = std::numeric_limits<double>::infinity();
  for (iterations = 0; iterations < opt.max_iterations; ++iterations) {
    Vec y = step(kernel, x);
    residual = max_abs_diff(y, x);
    if (residual <= opt.power_target) {
      x = std::move(y);
      break;
    }
    x = averaging ? Vec(0.5 * (x + y)) : std::move(y);
    x /= x.sum();
    if ((iterations + 1) % kWindow == 0) {
      if (!averaging && residual > 0.5 * checkpoint) averaging = true;
      checkpoint = residual;
    }
  }
  return x;
}

// Iterative Tarjan over the support graph; counts SCCs with no exit.
std::size_t count_closed_classes(const Kernel& kernel) {
  const Index n = kernel.rows();
  std::vector<Index> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<char> on_stack(n, 0);
  std::vector<Index> stack;
  std::vector<std::pair<Index, Index>> call;  // (node, next outer position)
  Index counter = 0, components = 0;
  const auto* outer = kernel.outerIndexPtr();
  const auto* inner = kernel.innerIndexPtr();
  const auto* values = kernel.valuePtr();

  for (Index root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    call.emplace_back(root, outer[root]);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& [v, pos] = call.back();
      const Index end = outer[v + 1];
      bool descended = false;
      while (pos < end) {
        const Index w = inner[pos];
        const double p = values[pos];
        ++pos;
        if (p <= 0.0) continue;
        if (index[w] == -1) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.emplace_back(w, outer[w]);
          descended = true;
          break;
        }
        if (on_stack[w]) low[v] = std::min(low[v], index[w]);
      }
      if (descended) continue;
      const Index node = v;
      if (low[node] == index[node]) {
        Index w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = components;
        } while (w != node);
        ++components;
      }
      call.pop_back();
      if (!call.empty()) {
        const Index parent = call.back().first;
        low[parent] = std::min(low[parent], low[node]);
      }
    }
  }

  std::vector<char> has_exit(components, 0);
  for (Index v = 0; v < n; ++v) {
    for (Index pos = outer[v]; pos < outer[v + 1]; ++pos) {
      if (values[pos] > 0.0 && comp[inner[pos]] != comp[v]) has_exit[comp[v]] = 1;
    }
  }
  return static_cast<std::size_t>(std::count(has_exit.begin(), has_exit.end(), 0));
}

}  // namespace

StochasticReport verify_stochastic(const Kernel& kernel, double tolerance) {
  StochasticReport report;
  for (Index k = 0; k < kernel.rows(); ++k) {
    double sum = 0.0;
    for (Kernel::InnerIterator it(kernel, k); it; ++it) {
      sum += it.value();
      if (it.value() < 0.0) {
        report.negative_entries.push_back({static_cast<std::size_t>(k),
                                           static_cast<std::size_t>(it.col()), it.value()});
      }
    }
    if (std::abs(sum - 1.0) > tolerance) report.bad_rows.push_back({static_cast<std::size_t>(k), sum});
  }
  return report;
}

std::size_t closed_class_count(const Kernel& kernel) { return count_closed_classes(kernel); }

double stationary_residual(const Kernel& kernel, const std::vector<double>& pi) {
  if (static_cast<Index>(pi.size()) != kernel.rows()) {
    throw InputShapeError("distribution length does not match the kernel");
  }
  const Eigen::Map<const Vec> x(pi.data(), static_cast<Index>(pi.size()));
  return max_abs_diff(step(kernel, x), x);
}

StationaryDistribution solve_stationary(const Kernel& kernel, const SolveOptions& opt) {
  const Index n = kernel.rows();
  if (n == 0 || kernel.cols() != n) throw ModelError("kernel must be square and non-empty");
  const auto report = verify_stochastic(kernel);
  if (!report.ok()) {
    std::ostringstream os;
    os << "kernel is not row-stochastic: " << report.bad_rows.size() << " bad row(s), "
       << report.negative_entries.size() << " negative entr(ies)";
    if (!report.bad_rows.empty()) {
      os << "; first bad row " << report.bad_rows.front().row << " sums to "
         << report.bad_rows.front().sum;
    }
    throw ModelError(os.str());
  }
  if (const auto classes = count_closed_classes(kernel); classes != 1) {
    throw MultiClassError("chain has " + std::to_string(classes) +
                          " closed communicating classes; stationary distribution is not unique");
  }

  StationaryDistribution out;
  Vec x;
  if (static_cast<std::size_t>(n) < opt.direct_limit) {
    x = solve_direct(kernel);
    tidy(x);
    out.method = "direct";
    out.residual = max_abs_diff(step(kernel, x), x);
    if (out.residual > opt.tolerance) {
      // Polish with a few multiplications; the direct answer is a good start.
      double r = 0.0;
      x = solve_power(kernel, x, opt, out.iterations, r);
      tidy(x);
      out.method = "direct+power";
      out.residual = max_abs_diff(step(kernel, x), x);
    }
  } else {
    double r = 0.0;
    x = solve_power(kernel, Vec::Constant(n, 1.0 / static_cast<double>(n)), opt, out.iterations, r);
    tidy(x);
    out.method = "power";
    out.residual = max_abs_diff(step(kernel, x), x);
  }
  if (!(out.residual <= opt.tolerance)) {
    std::ostringstream os;
    os << "stationary solve did not converge: residual " << out.residual << " after "
       << out.iterations << " iterations";
    throw ConvergenceError(os.str(), out.residual);
  }
  out.pi.assign(x.data(), x.data() + n);
  return out;
}

}  // namespace mstage
