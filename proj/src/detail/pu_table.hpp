#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "mstage/core.hpp"

namespace mstage::detail {

// Pr1 via power tables: four popcounts and four lookups per call.
class PuTable {
 public:
  PuTable(const TrafficParams& t, int n) : n_(n), mask_(n >= 32 ? ~0U : (1U << n) - 1U) {
    auto powers = [n](double x) {
      std::vector<double> v(static_cast<std::size_t>(n) + 1, 1.0);
      for (int k = 1; k <= n; ++k) v[k] = v[k - 1] * x;
      return v;
    };
    arrive_ = powers(t.p_pa);
    stay_free_ = powers(1.0 - t.p_pa);
    depart_ = powers(t.p_pd);
    stay_busy_ = powers(1.0 - t.p_pd);
  }

  int channels() const { return n_; }
  std::uint32_t patterns() const { return 1U << n_; }

  double operator()(std::uint32_t from, std::uint32_t to) const {
    return arrive_[std::popcount(~from & to & mask_)] *
           stay_free_[std::popcount(~from & ~to & mask_)] *
           depart_[std::popcount(from & ~to & mask_)] *
           stay_busy_[std::popcount(from & to & mask_)];
  }

 private:
  int n_;
  std::uint32_t mask_;
  std::vector<double> arrive_, stay_free_, depart_, stay_busy_;
};

}  // namespace mstage::detail
