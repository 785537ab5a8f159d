#pragma once

namespace mstage {

/// Energy detector operating conditions.
///
/// The decision statistic is the received energy averaged over
/// u = bandwidth * sense_time samples and normalized to the noise power, so a
/// vacant channel centers on 1 and an occupied one on 1 + snr. Both hypotheses
/// are approximated as Gaussian: variance 2/u when vacant, 2(1 + 2 snr)/u when
/// occupied.
struct DetectorParams {
  double snr = 0.1;          ///< linear, at the sensing receiver
  double bandwidth = 6e6;    ///< Hz
  double sense_time = 1e-4;  ///< s
  double threshold = 1.0;    ///< normalized decision level
};

struct RocPoint {
  double p_f = 0.0;  ///< false alarm
  double p_m = 0.0;  ///< mis-detection
};

/// Throws ConfigError when u < 1 or snr <= 0.
RocPoint roc_point(const DetectorParams& d);

struct Calibration {
  double threshold = 0.0;
  double p_f = 0.0;
};

/// Threshold meeting a mis-detection target; bisection with bracket expansion.
/// Throws CalibrationError if the target cannot be bracketed or met to 1e-9.
Calibration calibrate_threshold(double snr, double bandwidth, double sense_time, double p_m_target);

/// Error rates of a full-slot observation (quiet / pre-sensing) that reuses the
/// stage threshold calibrated at `stage_time`.
RocPoint full_slot_rates(double snr, double bandwidth, double stage_time, double slot_time,
                         double p_m_target);

/// Standard normal upper tail.
double q_function(double x);

}  // namespace mstage
