#include "mstage/detector.hpp"

#include <cmath>
#include <sstream>

#include "mstage/errors.hpp"

namespace mstage {
namespace {

void require_valid(double snr, double bandwidth, double sense_time) {
  if (!(snr > 0.0)) throw ConfigError("detector snr must be positive");
  if (!(bandwidth * sense_time >= 1.0)) {
    throw ConfigError("detector needs bandwidth * sense_time >= 1 sample");
  }
}

double misdetection(double snr, double samples, double threshold) {
  const double sd = std::sqrt(2.0 * (1.0 + 2.0 * snr) / samples);
  return 1.0 - q_function((threshold - 1.0 - snr) / sd);
}

}  // namespace

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

RocPoint roc_point(const DetectorParams& d) {
  require_valid(d.snr, d.bandwidth, d.sense_time);
  const double u = d.bandwidth * d.sense_time;
  RocPoint r;
  r.p_f = q_function((d.threshold - 1.0) / std::sqrt(2.0 / u));
  r.p_m = misdetection(d.snr, u, d.threshold);
  return r;
}

Calibration calibrate_threshold(double snr, double bandwidth, double sense_time,
                                double p_m_target) {
  require_valid(snr, bandwidth, sense_time);
  if (!(p_m_target > 0.0 && p_m_target < 1.0)) {
    throw CalibrationError("mis-detection target must lie in (0,1)");
  }
  const double u = bandwidth * sense_time;
  auto pm = [&](double threshold) { return misdetection(snr, u, threshold); };

  const double center = 1.0 + snr;
  double width = std::sqrt(2.0 * (1.0 + 2.0 * snr) / u);
  double lo = center - width;
  double hi = center + width;
  for (int k = 0; k < 64 && !(pm(lo) <= p_m_target && pm(hi) >= p_m_target); ++k) {
    width *= 2.0;
    lo = center - width;
    hi = center + width;
  }
  if (!(pm(lo) <= p_m_target && pm(hi) >= p_m_target)) {
    throw CalibrationError("could not bracket the mis-detection target");
  }
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    const double value = pm(mid);
    if (value == p_m_target) {
      lo = hi = mid;
      break;
    }
    (value < p_m_target ? lo : hi) = mid;
    if (hi - lo <= 1e-15 * std::abs(mid)) break;
  }
  Calibration c;
  c.threshold = 0.5 * (lo + hi);
  const double achieved = pm(c.threshold);
  if (std::abs(achieved - p_m_target) > 1e-9) {
    std::ostringstream os;
    os << "calibration reached p_m = " << achieved << " for target " << p_m_target;
    throw CalibrationError(os.str());
  }
  c.p_f = roc_point({snr, bandwidth, sense_time, c.threshold}).p_f;
  return c;
}

RocPoint full_slot_rates(double snr, double bandwidth, double stage_time, double slot_time,
                         double p_m_target) {
  const Calibration stage = calibrate_threshold(snr, bandwidth, stage_time, p_m_target);
  return roc_point({snr, bandwidth, slot_time, stage.threshold});
}

}  // namespace mstage
