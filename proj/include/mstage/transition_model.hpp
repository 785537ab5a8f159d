#pragma once

#include <Eigen/SparseCore>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

namespace mstage {

/// Row-major sparse transition matrix; entry (k, l) is Pr(state l | state k).
using Kernel = Eigen::SparseMatrix<double, Eigen::RowMajor, std::int64_t>;

/// Feasible state set, its transition kernel, and the state -> row index map.
///
/// `State` must expose `std::uint64_t key() const` giving a unique packing.
template <class State>
struct TransitionModel {
  std::vector<State> states;
  Kernel kernel;
  std::unordered_map<std::uint64_t, std::size_t> index;

  std::size_t size() const { return states.size(); }

  std::optional<std::size_t> index_of(const State& s) const {
    auto it = index.find(s.key());
    if (it == index.end()) return std::nullopt;
    return it->second;
  }

  double probability(const State& from, const State& to) const {
    auto k = index_of(from);
    auto l = index_of(to);
    if (!k || !l) return 0.0;
    return kernel.coeff(static_cast<std::int64_t>(*k), static_cast<std::int64_t>(*l));
  }
};

}  // namespace mstage
