#include <doctest.h>

#include <cmath>
#include <limits>

#include "mstage/detector.hpp"
#include "mstage/errors.hpp"

using namespace mstage;

namespace {

// Upper normal tail by Simpson integration of the density: independent of erfc.
double tail_oracle(double x) {
  const double hi = x + 12.0;
  const int n = 20000;
  const double h = (hi - x) / n;
  auto pdf = [](double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * M_PI); };
  double s = pdf(x) + pdf(hi);
  for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * pdf(x + k * h);
  return s * h / 3.0;
}

DetectorParams params(double sense_time, double threshold) {
  DetectorParams d;
  d.sense_time = sense_time;
  d.threshold = threshold;
  return d;
}

}  // namespace

TEST_CASE("q function against numerical integration") {
  for (double x : {-2.0, -0.5, 0.0, 0.7, 1.2816, 3.0})
    CHECK(q_function(x) == doctest::Approx(tail_oracle(x)).epsilon(1e-9));
}

TEST_CASE("roc point at a hand-computed threshold") {
  // u = 600 samples, threshold 1.1: vacant z = 0.1 / sqrt(2/600), occupied z = 0.
  const RocPoint r = roc_point(params(1e-4, 1.1));
  CHECK(r.p_f == doctest::Approx(tail_oracle(0.1 / std::sqrt(2.0 / 600.0))).epsilon(1e-9));
  CHECK(r.p_m == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("threshold extremes") {
  const RocPoint hi = roc_point(params(1e-4, 1e6));
  CHECK(hi.p_f == doctest::Approx(0.0));
  CHECK(hi.p_m == doctest::Approx(1.0));
  const RocPoint lo = roc_point(params(1e-4, 0.0));
  CHECK(lo.p_f == doctest::Approx(1.0));
  CHECK(lo.p_m == doctest::Approx(0.0));
}

TEST_CASE("monotone in threshold, both rates strictly inside (0,1)") {
  double last_pf = 2.0, last_pm = -1.0;
  for (double th = 0.95; th <= 1.2; th += 0.01) {
    const RocPoint r = roc_point(params(1e-4, th));
    CHECK(r.p_f < last_pf);
    CHECK(r.p_m > last_pm);
    CHECK(r.p_f > 0.0);
    CHECK(r.p_m < 1.0);
    last_pf = r.p_f;
    last_pm = r.p_m;
  }
}

TEST_CASE("parameter errors") {
  DetectorParams d = params(1e-7, 1.0);  // 0.6 samples
  CHECK_THROWS_AS(roc_point(d), ConfigError);
  d = params(1e-4, 1.0);
  d.snr = 0.0;
  CHECK_THROWS_AS(roc_point(d), ConfigError);
  CHECK_THROWS_AS(calibrate_threshold(0.1, 6e6, 1e-4, 0.0), CalibrationError);
  CHECK_THROWS_AS(calibrate_threshold(0.1, 6e6, 1e-4, 1.0), CalibrationError);
}

TEST_CASE("calibration recovers the target") {
  for (double t : {50e-6, 100e-6, 240e-6, 500e-6, 1e-3}) {
    for (double pm : {0.01, 0.1, 0.5, 0.9}) {
      const Calibration c = calibrate_threshold(0.1, 6e6, t, pm);
      const RocPoint r = roc_point(params(t, c.threshold));
      CHECK(std::abs(r.p_m - pm) <= 1e-9);
      CHECK(r.p_f == doctest::Approx(c.p_f));
    }
  }
}

TEST_CASE("median target puts the threshold at the occupied mean") {
  const Calibration c = calibrate_threshold(0.1, 6e6, 1e-4, 0.5);
  CHECK(c.threshold == doctest::Approx(1.1).epsilon(1e-9));
  // Vanishing SNR: the occupied median approaches the vacant mean.
  const Calibration z = calibrate_threshold(1e-9, 6e6, 1e-4, 0.5);
  CHECK(z.threshold == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(z.p_f == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("table operating points") {
  CHECK(calibrate_threshold(0.1, 6e6, 240e-6, 0.1).p_f == doctest::Approx(0.1).epsilon(0.5));
  CHECK(std::abs(calibrate_threshold(0.1, 6e6, 240e-6, 0.1).p_f - 0.1) <= 0.05);
  CHECK(std::abs(calibrate_threshold(0.1, 6e6, 100e-6, 0.1).p_f - 0.36) <= 0.05);
  CHECK(std::abs(calibrate_threshold(0.1, 6e6, 500e-6, 0.1).p_f - 0.013) <= 0.05);
}

TEST_CASE("false alarm at fixed p_m decreases with sensing time") {
  double last = 1.0;
  for (double t = 50e-6; t <= 500e-6 + 1e-12; t += 25e-6) {
    const double pf = calibrate_threshold(0.1, 6e6, t, 0.1).p_f;
    CHECK(pf < last);
    last = pf;
  }
}

TEST_CASE("full-slot rates reuse the stage threshold") {
  const Calibration c = calibrate_threshold(0.1, 6e6, 240e-6, 0.1);
  const RocPoint full = full_slot_rates(0.1, 6e6, 240e-6, 1e-3, 0.1);
  const RocPoint direct = roc_point(params(1e-3, c.threshold));
  CHECK(full.p_f == doctest::Approx(direct.p_f));
  CHECK(full.p_m == doctest::Approx(direct.p_m));
  CHECK(full.p_f < c.p_f);
  CHECK(full.p_m < 0.1);
}
