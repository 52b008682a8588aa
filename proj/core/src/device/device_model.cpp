#include "qlink/device/device_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qlink/error.hpp"
#include "qlink/units.hpp"

namespace qlink::device {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidParameter(what);
}

}  // namespace

void QubitParams::validate() const {
  require(omega_min > 0.0 && omega_min <= omega_idle && omega_idle <= omega_max,
          "qubit: need 0 < omega_min <= omega_idle <= omega_max");
  require(T1 > 0.0, "qubit: T1 must be positive");
  require(Tphi > 0.0, "qubit: Tphi must be positive");
  require(L_J > 0.0, "qubit: L_J must be positive");
  require(junction_asymmetry > 0.0, "qubit: junction asymmetry must be positive");
}

void CouplerParams::validate() const {
  require(L_g > 0.0, "coupler: L_g must be positive");
  require(L_w >= 0.0, "coupler: L_w must be non-negative");
  require(L_T > 0.0, "coupler: L_T must be positive");
  // Beyond this the flux-phase relation folds over and the branch is ambiguous.
  require(L_T > 2.0 * L_g + L_w,
          "coupler: L_T must exceed 2 L_g + L_w for a monotonic flux-phase relation");
  require(kappa_max >= 0.0, "coupler: kappa_max must be non-negative");
}

void CableParams::validate() const {
  require(length > 0.0, "cable: length must be positive");
  require(specific_capacitance > 0.0, "cable: specific capacitance must be positive");
  require(specific_inductance > 0.0, "cable: specific inductance must be positive");
  require(T1_mode > 0.0, "cable: mode T1 must be positive");
  require(T2_mode > 0.0, "cable: mode T2 must be positive");
  require(thermal_population >= 0.0 && thermal_population < 0.1,
          "cable: thermal population must lie in [0, 0.1)");
  require(joint_transmission_db <= 0.0, "cable: joint transmission must be <= 0 dB");
  require(n_joints >= 0, "cable: joint count must be non-negative");
}

double DerivedCable::C_m(int m) const {
  const double w = omega_m(m);
  if (w <= 0.0) throw InvalidParameter("mode capacitance needs a positive mode index");
  return 1.0 / (w * w * L_m);
}

DerivedCable cable_derived_params(const CableParams& cable) {
  require(cable.length > 0.0 && cable.specific_capacitance > 0.0 &&
              cable.specific_inductance > 0.0,
          "cable: length and line constants must be positive");
  require(cable.T1_mode > 0.0, "cable: mode T1 must be positive");

  DerivedCable d;
  const double lc = std::sqrt(cable.specific_inductance * cable.specific_capacitance);
  d.velocity = 1.0 / lc;
  d.tau_st = cable.length * lc;
  d.omega_fsr = kPi / d.tau_st;
  d.Z0 = std::sqrt(cable.specific_inductance / cable.specific_capacitance);
  d.L_m = 0.5 * cable.specific_inductance * cable.length;
  d.per_transit_loss = -std::expm1(-d.tau_st / cable.T1_mode);
  // One neper is 20 log10(e) = 8.686 dB of amplitude.
  const double neper_db = 20.0 / std::log(10.0);
  d.linear_loss_db_per_m = neper_db / (2.0 * d.velocity * cable.T1_mode);
  return d;
}

double joint_transmission(const CableParams& cable) {
  return std::pow(10.0, cable.n_joints * cable.joint_transmission_db / 10.0);
}

double phase_to_flux(const CouplerParams& coupler, double delta) {
  return (delta + coupler.phase_coefficient() * std::sin(delta)) / kTwoPi;
}

double flux_to_phase(const CouplerParams& coupler, double flux) {
  coupler.validate();
  if (!(flux >= -0.5 && flux <= 0.5)) {
    throw InvalidParameter("flux_to_phase: flux must lie in [-0.5, 0.5] Phi0");
  }
  const double beta = coupler.phase_coefficient();
  auto residual = [&](double d) { return d + beta * std::sin(d) - kTwoPi * flux; };

  double lo = -kPi;
  double hi = kPi;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (residual(mid) > 0.0) hi = mid; else lo = mid;
  }
  double delta = 0.5 * (lo + hi);
  for (int i = 0; i < 8; ++i) {
    const double slope = 1.0 + beta * std::cos(delta);
    if (slope <= 0.0) break;
    const double step = residual(delta) / slope;
    const double next = std::clamp(delta - step, -kPi, kPi);
    delta = next;
    if (std::abs(step) < 1e-16) break;
  }
  if (std::abs(residual(delta)) > kTwoPi * 1e-12) {
    throw NumericalError("flux_to_phase: root finder did not reach 1e-12 flux residual");
  }
  return delta;
}

double coupler_off_bias(const CouplerParams& coupler) {
  coupler.validate();
  return (kPi / 2.0 + coupler.phase_coefficient()) / kTwoPi;
}

MutualInductance mutual_inductance(const CouplerParams& coupler, double delta) {
  coupler.validate();
  const double c = std::cos(delta);
  MutualInductance out;
  if (std::abs(c) < 1e-15) {
    out.off_state = true;
    return out;
  }
  // Multiplied through by cos(delta); the denominator never vanishes because
  // L_T > 2 L_g + L_w.
  out.henries = coupler.L_g * coupler.L_g * c /
                ((2.0 * coupler.L_g + coupler.L_w) * c + coupler.L_T);
  return out;
}

double jc_coupling(double M, double omega_m, double omega_q, double L_J,
                   double L_g, double L_m) {
  require(omega_m > 0.0 && omega_q > 0.0, "jc_coupling: frequencies must be positive");
  require(L_J > 0.0 && L_g > 0.0 && L_m > 0.0, "jc_coupling: inductances must be positive");
  return -0.5 * M * std::sqrt(omega_m * omega_q / ((L_g + L_J) * L_m));
}

double emission_rate_from_coupling(double g, double omega_fsr) {
  require(omega_fsr > 0.0, "emission rate: free spectral range must be positive");
  return kTwoPi * g * g / omega_fsr;
}

double emission_rate_from_inductance(double M, double omega_q, double L_J,
                                     double L_g, double Z0) {
  require(omega_q > 0.0 && L_J > 0.0 && L_g > 0.0 && Z0 > 0.0,
          "emission rate: inputs must be positive");
  const double x = M * omega_q;
  return x * x / ((L_J + L_g) * Z0);
}

double qubit_freq_shift(double kappa, double Z0, double L_J, double L_g) {
  require(kappa >= 0.0, "frequency shift: kappa must be non-negative");
  require(Z0 > 0.0 && L_J > 0.0 && L_g > 0.0, "frequency shift: inputs must be positive");
  return -0.5 * std::sqrt(kappa * Z0 / (L_g + L_J));
}

double qubit_freq_shift_from_coupling(double g, double L_m, double L_J, double L_g) {
  require(L_m > 0.0 && L_J > 0.0 && L_g > 0.0, "frequency shift: inductances must be positive");
  return -std::abs(g) * std::sqrt(L_m / (L_g + L_J));
}

double kappa_at_flux(const CouplerParams& coupler, const QubitParams& qubit,
                     double Z0, double flux) {
  const double delta = flux_to_phase(coupler, flux);
  const auto M = mutual_inductance(coupler, delta);
  return emission_rate_from_inductance(M.henries, qubit.omega_idle, qubit.L_J,
                                       coupler.L_g, Z0);
}

double fit_coupler_inductance(const CouplerParams& coupler,
                              const QubitParams& qubit, double Z0) {
  require(coupler.kappa_max > 0.0, "L_T fit: kappa_max must be positive");
  require(coupler.L_g > 0.0 && coupler.L_w >= 0.0, "L_T fit: invalid linear inductors");
  require(qubit.omega_idle > 0.0 && qubit.L_J > 0.0 && Z0 > 0.0,
          "L_T fit: invalid qubit or cable parameters");
  const double m_max =
      std::sqrt(coupler.kappa_max * (qubit.L_J + coupler.L_g) * Z0) / qubit.omega_idle;
  return 2.0 * coupler.L_g + coupler.L_w + coupler.L_g * coupler.L_g / m_max;
}

}  // namespace qlink::device
