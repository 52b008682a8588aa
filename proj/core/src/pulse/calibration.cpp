#include "qlink/pulse/calibration.hpp"

#include <algorithm>
#include <cmath>

#include "qlink/error.hpp"
#include "qlink/util/curve_fit.hpp"
#include "qlink/util/parallel.hpp"

namespace qlink::pulse {

std::string to_string(CouplingVerdict v) {
  switch (v) {
    case CouplingVerdict::Calibrated: return "calibrated";
    case CouplingVerdict::UnderCoupling: return "under coupling";
    case CouplingVerdict::OverCoupling: return "over coupling";
  }
  return "unknown";
}

double fractional_residual(double kappa_c, double alpha, const CalibrationConfig& cfg) {
  const double tau = cfg.channel.tau_st;
  const double dt = iosim::aligned_step(tau, cfg.dt_max);
  // The logistic tail needs about two lead times; stop before the echo.
  double window = cfg.window > 0.0 ? cfg.window : std::min(2.0 * logistic_lead(kappa_c) + 10.0 / kappa_c, 2.0 * tau);
  window = std::min(window, 2.0 * tau);
  iosim::NodeDrive a;
  a.schedule = distort(fractional_schedule(kappa_c, alpha, window, dt), cfg.distortion);
  const auto tr = iosim::simulate_free_emission(a, cfg.channel);
  // Grid rounding may add one sample past 2 tau; read at or before it.
  const std::size_t last = std::min(tr.size() - 1, 2 * tr.delay_samples);
  return std::norm(tr.sigma2[last]);
}

CalibrationResult calibration_scan(const std::vector<double>& alpha_grid, const CalibrationConfig& cfg) {
  if (alpha_grid.size() < 3) throw InvalidParameter("calibration: need at least three alpha points");
  for (double a : alpha_grid) {
    if (!(a > 0.0 && a < 1.0)) throw InvalidParameter("calibration: alpha points must lie in (0, 1)");
  }
  cfg.channel.validate();
  CalibrationResult r;
  r.alpha = alpha_grid;
  r.residual.assign(alpha_grid.size(), 0.0);
  parallel_for(alpha_grid.size(), cfg.workers,
               [&](std::size_t i) { r.residual[i] = fractional_residual(cfg.kappa_c, alpha_grid[i], cfg); });
  r.deviation.resize(alpha_grid.size());
  for (std::size_t i = 0; i < alpha_grid.size(); ++i) {
    r.deviation[i] = r.residual[i] - (1.0 - alpha_grid[i]);
    r.max_abs_deviation = std::max(r.max_abs_deviation, std::abs(r.deviation[i]));
  }
  const auto c = polyfit(r.alpha, r.deviation, 2);
  r.c0 = c[0];
  r.c1 = c[1];
  r.c2 = c[2];
  if (r.max_abs_deviation < cfg.flat_threshold) r.verdict = CouplingVerdict::Calibrated;
  else r.verdict = r.c2 < 0.0 ? CouplingVerdict::UnderCoupling : CouplingVerdict::OverCoupling;
  return r;
}

}  // namespace qlink::pulse
