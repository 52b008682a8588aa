#pragma once

// Lumped-element model of the qubit / gmon coupler / cable chain:
// flux bias -> junction phase -> mutual inductance -> JC coupling -> emission
// rate and the accompanying qubit frequency shift.

namespace qlink::device {

struct QubitParams {
  double omega_min = 0.0;   // rad/s
  double omega_max = 0.0;   // rad/s
  double omega_idle = 0.0;  // rad/s
  // Stored for completeness; the single-excitation dynamics never uses it.
  double anharmonicity = 0.0;  // rad/s, negative
  double T1 = 0.0;             // s
  double Tphi = 0.0;           // s
  double L_J = 0.0;            // H, junction inductance at the operating point
  double junction_asymmetry = 1.0;

  void validate() const;
};

struct CouplerParams {
  double L_g = 0.2e-9;   // H, each linear inductor
  double L_w = 0.06e-9;  // H, stray wiring inductance
  double L_T = 0.0;      // H, coupler junction inductance at delta = 0
  double kappa_max = 0.0;  // 1/s, measured maximum emission rate

  /// (2 L_g + L_w) / L_T, the sin-term weight in the flux-phase relation.
  double phase_coefficient() const { return (2.0 * L_g + L_w) / L_T; }
  void validate() const;
};

struct CableParams {
  double length = 0.0;                // m
  double specific_capacitance = 0.0;  // F/m
  double specific_inductance = 0.0;   // H/m
  double T1_mode = 0.0;               // s
  double T2_mode = 0.0;               // s
  double thermal_population = 0.0;
  double joint_transmission_db = 0.0;  // dB per joint, <= 0
  int n_joints = 0;

  void validate() const;
};

struct DerivedCable {
  double omega_fsr = 0.0;  // rad/s
  double tau_st = 0.0;     // s, single transit
  double Z0 = 0.0;         // ohm
  double velocity = 0.0;   // m/s
  double L_m = 0.0;        // H, mode inductance (same for every mode)
  double per_transit_loss = 0.0;  // energy fraction lost per transit
  double linear_loss_db_per_m = 0.0;

  double omega_m(int m) const { return m * omega_fsr; }
  double C_m(int m) const;
};

DerivedCable cable_derived_params(const CableParams& cable);

/// Energy transmission of the joints, 10^(n * dB / 10).
double joint_transmission(const CableParams& cable);

/// Forward flux-phase relation: 2 pi Phi/Phi0 = delta + beta sin(delta).
double phase_to_flux(const CouplerParams& coupler, double delta);

/// Inverse of phase_to_flux on the monotonic branch, flux in [-0.5, 0.5].
double flux_to_phase(const CouplerParams& coupler, double flux);

/// Flux (in units of Phi0) that puts the junction phase at pi/2.
double coupler_off_bias(const CouplerParams& coupler);

struct MutualInductance {
  double henries = 0.0;
  bool off_state = false;
};

/// M = L_g^2 / (2 L_g + L_w + L_T / cos delta). Exactly zero, with the
/// off_state flag raised, where cos delta vanishes.
MutualInductance mutual_inductance(const CouplerParams& coupler, double delta);

/// Jaynes-Cummings coupling g = -(M/2) sqrt(w_m w_q / ((L_g + L_J) L_m)).
double jc_coupling(double M, double omega_m, double omega_q, double L_J,
                   double L_g, double L_m);

/// Fermi golden rule, kappa = 2 pi g^2 / w_FSR.
double emission_rate_from_coupling(double g, double omega_fsr);

/// Closed circuit form, kappa = (M w_q)^2 / ((L_J + L_g) Z0).
double emission_rate_from_inductance(double M, double omega_q, double L_J,
                                     double L_g, double Z0);

/// Qubit frequency shift from the emission rate,
/// dw = -(1/2) sqrt(kappa Z0 / (L_g + L_J)). Always <= 0.
double qubit_freq_shift(double kappa, double Z0, double L_J, double L_g);

/// Same shift written through the on-resonance coupling,
/// dw = -|g| sqrt(L_m / (L_g + L_J)).
double qubit_freq_shift_from_coupling(double g, double L_m, double L_J,
                                      double L_g);

/// Emission rate reached at a given flux bias (full forward chain).
double kappa_at_flux(const CouplerParams& coupler, const QubitParams& qubit,
                     double Z0, double flux);

/// Coupler junction inductance L_T for which the chain reaches
/// coupler.kappa_max at delta = pi. Closed form:
/// L_T = 2 L_g + L_w + L_g^2 / |M_max|, |M_max| = sqrt(kappa_max (L_J+L_g) Z0)/w_q.
double fit_coupler_inductance(const CouplerParams& coupler,
                              const QubitParams& qubit, double Z0);

}  // namespace qlink::device
