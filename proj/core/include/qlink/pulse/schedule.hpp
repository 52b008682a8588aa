#pragma once

#include <string>
#include <vector>

#include "qlink/device/device_model.hpp"

namespace qlink::pulse {

/// Sampled emission-rate waveform on a uniform grid starting at t = 0.
struct PulseSchedule {
  std::vector<double> t;                 // s
  std::vector<double> kappa;             // 1/s
  std::vector<double> delta_omega_comp;  // rad/s, empty when not computed
  std::vector<double> flux;              // Phi/Phi0, empty when not computed
  double kappa_c = 0.0;
  double alpha = 1.0;

  std::size_t size() const { return t.size(); }
  double dt() const;
  double duration() const { return t.empty() ? 0.0 : t.back(); }
  void validate() const;
};

/// Uniform grid 0, dt, ..., with an even number of intervals covering `window`.
std::vector<double> make_grid(double window, double dt);

/// Logistic rate kc / (1 + exp(-kc x)), midpoint kc/2 at x = 0.
double logistic_rate(double kappa_c, double x);

/// Delay from the window start to the logistic midpoint so that the rate at
/// the window start is 1e-3 kappa_c.
double logistic_lead(double kappa_c);

/// Shortest window holding both the emission and the mirrored absorption.
double shaped_window(double kappa_c, double tau_st);

struct SchedulePair {
  PulseSchedule sender;
  PulseSchedule receiver;
};

/// Sender rises along the logistic (zero before the window start), receiver
/// is its mirror about the transit: kappa_B(t) = kappa_A(2 t_lead + tau - t).
/// Refuses kappa_c above either kappa_max.
SchedulePair shaped_schedules(double kappa_c, double tau_st, double window, double dt,
                              double kappa_max_a = 0.0, double kappa_max_b = 0.0);

/// Sender schedule releasing the fraction alpha of the excitation.
PulseSchedule fractional_schedule(double kappa_c, double alpha, double window, double dt,
                                  double kappa_max = 0.0);

/// Constant rate over [0, window].
PulseSchedule constant_schedule(double kappa, double window, double dt);

/// All-zero schedule.
PulseSchedule off_schedule(double window, double dt);

/// Deliberate control errors used in sensitivity and calibration studies.
struct PulseDistortion {
  double kappa_scale = 1.0;
  double timing_skew = 0.0;  // s, positive delays the waveform (rounded to the grid)
};

PulseSchedule distort(const PulseSchedule& sched, const PulseDistortion& d);

/// Highest rate the coupler chain reaches (flux 0.5).
double chain_kappa_max(const device::CouplerParams& coupler, const device::QubitParams& qubit,
                       double Z0);

/// Per sample kappa -> M -> delta (branch [pi/2, pi]) -> flux. Throws
/// OutOfRange naming the first sample above the chain maximum.
std::vector<double> kappa_to_flux(const PulseSchedule& sched, const device::CouplerParams& coupler,
                                  const device::QubitParams& qubit, double Z0);

std::vector<double> flux_to_kappa(const std::vector<double>& flux,
                                  const device::CouplerParams& coupler,
                                  const device::QubitParams& qubit, double Z0);

/// Qubit detuning that cancels the coupler-induced shift, +(1/2) sqrt(kappa Z0/(L_g+L_J)).
std::vector<double> compensation_schedule(const PulseSchedule& sched,
                                          const device::QubitParams& qubit,
                                          const device::CouplerParams& coupler, double Z0);

/// The uncompensated shift itself (<= 0).
std::vector<double> induced_shift(const PulseSchedule& sched, const device::QubitParams& qubit,
                                  const device::CouplerParams& coupler, double Z0);

/// Measured kappa(flux) table overriding the analytic chain. Needs flux
/// strictly increasing and kappa strictly increasing over the table.
class KappaFluxTable {
 public:
  KappaFluxTable(std::vector<double> flux, std::vector<double> kappa);
  static KappaFluxTable load_csv(const std::string& path);

  double kappa_at(double flux) const;
  double flux_at(double kappa) const;
  double kappa_min() const { return kappa_.front(); }
  double kappa_max() const { return kappa_.back(); }

 private:
  std::vector<double> flux_;
  std::vector<double> kappa_;
};

std::vector<double> kappa_to_flux(const PulseSchedule& sched, const KappaFluxTable& table);

/// CSV columns t_ns, kappa_per_ns, delta_omega_comp_mhz, flux.
void write_waveform_csv(const std::string& path, const PulseSchedule& sched);

}  // namespace qlink::pulse
