#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <numeric>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mstage/errors.hpp"
#include "mstage/transition_model.hpp"

namespace mstage::detail {

inline constexpr double kRowTolerance = 1e-12;

// Breadth-first closure from `initial`. `successors(state, out)` appends
// (next_state, probability) pairs; repeated targets are summed. `less` fixes
// the final state ordering. `describe` is used in error messages.
template <class State, class Successors, class Less, class Describe>
TransitionModel<State> reachable_model(const State& initial, Successors&& successors, Less&& less,
                                       Describe&& describe, std::size_t cap, bool with_kernel) {
  std::vector<State> found{initial};
  std::unordered_map<std::uint64_t, std::size_t> seen{{initial.key(), 0}};
  std::vector<std::vector<std::pair<std::size_t, double>>> rows;
  std::vector<std::pair<State, double>> out;
  std::unordered_map<std::uint64_t, std::size_t> row_slot;

  for (std::size_t head = 0; head < found.size(); ++head) {
    out.clear();
    successors(found[head], out);
    std::vector<std::pair<std::size_t, double>> row;
    row_slot.clear();
    for (auto& [next, p] : out) {
      if (p == 0.0) continue;
      const auto key = next.key();
      auto [it, inserted] = seen.try_emplace(key, found.size());
      if (inserted) {
        if (found.size() >= cap) {
          throw CapacityError("state enumeration exceeded the cap of " + std::to_string(cap) +
                              " states");
        }
        found.push_back(next);
      }
      auto [slot, fresh] = row_slot.try_emplace(key, row.size());
      if (fresh) {
        row.emplace_back(it->second, p);
      } else {
        row[slot->second].second += p;
      }
    }
    if (with_kernel) {
      double sum = 0.0;
      for (auto& e : row) sum += e.second;
      if (std::abs(sum - 1.0) > kRowTolerance) {
        std::ostringstream os;
        os.precision(17);
        os << "transition row of state " << describe(found[head]) << " sums to " << sum;
        throw ModelError(os.str());
      }
      rows.push_back(std::move(row));
    }
  }

  std::vector<std::size_t> order(found.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return less(found[a], found[b]); });
  std::vector<std::size_t> rank(found.size());
  for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = r;

  TransitionModel<State> model;
  model.states.reserve(found.size());
  for (auto k : order) model.states.push_back(found[k]);
  for (std::size_t r = 0; r < model.states.size(); ++r) model.index.emplace(model.states[r].key(), r);

  if (with_kernel) {
    const auto n = static_cast<std::int64_t>(found.size());
    model.kernel.resize(n, n);
    Eigen::VectorX<std::int64_t> nnz(n);
    for (std::size_t k = 0; k < rows.size(); ++k) nnz[rank[k]] = static_cast<std::int64_t>(rows[k].size());
    model.kernel.reserve(nnz);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const auto r = static_cast<std::int64_t>(rank[k]);
      for (auto& [col, p] : rows[k]) model.kernel.insert(r, static_cast<std::int64_t>(rank[col])) = p;
    }
    model.kernel.makeCompressed();
  }
  return model;
}

}  // namespace mstage::detail
