#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mstage/transition_model.hpp"

namespace mstage {

struct StationaryDistribution {
  std::vector<double> pi;  ///< aligned with the model's state order
  double residual = 0.0;   ///< max |pi * Lambda - pi|
  std::string method;      ///< "direct" or "power"
  std::size_t iterations = 0;
};

struct StochasticReport {
  struct RowIssue {
    std::size_t row;
    double sum;
  };
  struct EntryIssue {
    std::size_t row;
    std::size_t col;
    double value;
  };
  std::vector<RowIssue> bad_rows;
  std::vector<EntryIssue> negative_entries;

  bool ok() const { return bad_rows.empty() && negative_entries.empty(); }
};

/// Rows whose sum is off by more than `tolerance`, and every negative entry.
StochasticReport verify_stochastic(const Kernel& kernel, double tolerance = 1e-12);

template <class State>
StochasticReport verify_stochastic(const TransitionModel<State>& model, double tolerance = 1e-12) {
  return verify_stochastic(model.kernel, tolerance);
}

/// Number of closed communicating classes of the chain's support graph.
std::size_t closed_class_count(const Kernel& kernel);

struct SolveOptions {
  std::size_t direct_limit = 20000;  ///< sparse LU below this many states
  std::size_t max_iterations = 1000000;
  double tolerance = 1e-10;          ///< required residual
  double power_target = 1e-13;       ///< residual at which power iteration stops
};

/// Solves pi = pi * Lambda, sum(pi) = 1.
///
/// Throws ModelError for a non-stochastic kernel, MultiClassError when the
/// stationary distribution is not unique, and ConvergenceError when the
/// residual stays above `tolerance`.
StationaryDistribution solve_stationary(const Kernel& kernel, const SolveOptions& opt = {});

template <class State>
StationaryDistribution solve_stationary(const TransitionModel<State>& model,
                                        const SolveOptions& opt = {}) {
  return solve_stationary(model.kernel, opt);
}

/// max |pi * Lambda - pi|
double stationary_residual(const Kernel& kernel, const std::vector<double>& pi);

}  // namespace mstage
