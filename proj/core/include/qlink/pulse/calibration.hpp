#pragma once

#include <string>
#include <vector>

#include "qlink/iosim/pitch_catch.hpp"
#include "qlink/pulse/schedule.hpp"

namespace qlink::pulse {

enum class CouplingVerdict { Calibrated, UnderCoupling, OverCoupling };

std::string to_string(CouplingVerdict v);

struct CalibrationConfig {
  double kappa_c = 1.0 / 22e-9;
  iosim::ChannelParams channel;  // emission runs against a reflecting far end
  double window = 0.0;           // s, 0 picks the shaped window
  double dt_max = 0.05e-9;
  PulseDistortion distortion;
  double flat_threshold = 0.01;  // max |P1 - (1 - alpha)| counted as calibrated
  int workers = 1;
};

struct CalibrationResult {
  std::vector<double> alpha;
  std::vector<double> residual;   // sender P1 at the end of emission
  std::vector<double> deviation;  // residual - (1 - alpha)
  double c0 = 0.0, c1 = 0.0, c2 = 0.0;  // quadratic fit of the deviation
  double max_abs_deviation = 0.0;
  CouplingVerdict verdict = CouplingVerdict::Calibrated;
};

/// Residual sender population after fractional emission, read before the
/// first echo can return.
double fractional_residual(double kappa_c, double alpha, const CalibrationConfig& cfg);

/// Sweep alpha, fit deviation = c0 + c1 a + c2 a^2. Flat within threshold is
/// calibrated; otherwise c2 < 0 (curve bulging above the ideal line) reads
/// as under coupling and c2 > 0 as over coupling.
CalibrationResult calibration_scan(const std::vector<double>& alpha_grid, const CalibrationConfig& cfg);

}  // namespace qlink::pulse
