#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "qlink/device/device_model.hpp"
#include "qlink/pulse/schedule.hpp"

// Two emitters at the ends of a delay line, amplitude-level input-output
// equations:
//   d sigma/dt = -i dw sigma - (kappa/2 + 1/(2 T1)) sigma + sqrt(kappa) a_in
//   a_out = sqrt(kappa) sigma - a_in,   a_in(t) = sqrt(eta) a_out_other(t - tau)

namespace qlink::iosim {

using cdouble = std::complex<double>;

struct ChannelParams {
  double tau_st = 0.0;  // s
  double eta = 1.0;     // energy transmission per transit
  double thermal_population = 0.0;  // bookkeeping only, not injected

  void validate() const;
  /// Transit time of the cable; eta = cable loss times joint transmission.
  static ChannelParams from_cable(const device::CableParams& cable);
};

/// Largest step <= dt_max that divides tau_st an even number of times.
double aligned_step(double tau_st, double dt_max = 0.05e-9);

struct NodeDrive {
  pulse::PulseSchedule schedule;
  std::vector<double> detuning;  // rad/s per grid sample, empty means zero
  double detuning_offset = 0.0;  // rad/s, added to every sample
  std::optional<double> T1;      // s, self-decay when set
};

enum class Excited { Sender, Receiver };

struct PitchCatchSetup {
  NodeDrive a;  // sender side (Q2, coupler G_A)
  NodeDrive b;  // receiver side (Q3, coupler G_B)
  ChannelParams channel;
  Excited init = Excited::Sender;
  cdouble amplitude{1.0, 0.0};
};

struct IOTrajectory {
  std::vector<double> t;
  std::vector<cdouble> sigma2, sigma3;
  std::vector<cdouble> a_out2, a_out3, a_in2, a_in3;  // 1/sqrt(s)
  // Output fields just before each sample; they differ from a_out only where
  // a field switches on (t = 0 and its echoes every transit).
  std::vector<cdouble> a_out2_left, a_out3_left;
  std::vector<double> kappaA, kappaB;
  std::size_t delay_samples = 0;
  Excited init = Excited::Sender;

  std::size_t size() const { return t.size(); }
  double dt() const { return t.size() < 2 ? 0.0 : t[1] - t[0]; }
  /// Energy that has left one node within the last transit and not yet
  /// arrived at the other, trapezoid rule over the grid.
  std::vector<double> in_flight() const;
};

/// Fixed-step RK4 with macro step 2 dt: stage times land on grid samples, so
/// delayed inputs are read exactly. Odd samples are filled by cubic Hermite
/// interpolation. Needs tau_st / dt to be an even integer and an even number
/// of grid intervals.
IOTrajectory simulate_pitch_catch(const PitchCatchSetup& setup);

/// |sigma_receiver(end)|^2 / |sigma_sender(0)|^2.
double transfer_efficiency(const IOTrajectory& traj);
double transfer_efficiency_at(const IOTrajectory& traj, std::size_t index);

/// Sender schedule alone against a reflecting far end (kappa_B = 0).
IOTrajectory simulate_free_emission(const NodeDrive& sender, const ChannelParams& channel);

struct Curve {
  std::vector<double> x;
  std::vector<double> y;
};

/// 1 - efficiency versus a constant receiver detuning (Hz in, grid order kept).
Curve mismatch_scan(const PitchCatchSetup& base, const std::vector<double>& mismatch_hz,
                    int workers = 1);

struct EmissionPoint {
  double flux = 0.0;
  double kappa_model = 0.0;  // 1/s from the circuit chain
  double kappa_fit = 0.0;    // 1/s from the ringdown fit
  double kappa_fit_error = 0.0;
  bool below_detection = false;
};

/// Static flux bias, free emission, exponential fit over t < 2 tau.
std::vector<EmissionPoint> static_emission_scan(const device::CouplerParams& coupler,
                                                const device::QubitParams& qubit,
                                                const device::CableParams& cable,
                                                const std::vector<double>& flux_grid,
                                                double dt_max = 0.05e-9, int workers = 1);

struct FixedCouplingResult {
  std::vector<double> kappa;       // grid, 1/s
  std::vector<double> efficiency;  // best capture per kappa
  std::vector<double> cutoff;      // s, time of that capture
  double best_kappa = 0.0;
  double best_cutoff = 0.0;
  double best_efficiency = 0.0;
};

/// Both couplers held at the same constant rate; for every rate the receiver
/// is switched off at the moment of highest population before the first echo
/// (t < 3 tau). Returns the best over the grid.
FixedCouplingResult fixed_coupling_optimum(const ChannelParams& channel,
                                           const std::vector<double>& kappa_grid,
                                           double dt_max = 0.05e-9, int workers = 1);

/// Geometric grid of n rates with kappa*tau between lo and hi.
std::vector<double> flying_kappa_grid(double tau_st, double lo, double hi, int n);

/// CSV columns t_ns, re/im sigma2, re/im sigma3, |a_out2|^2, |a_out3|^2
/// (per ns), kappa_a, kappa_b (per ns); every `stride`-th sample.
void write_trajectory_csv(const std::string& path, const IOTrajectory& traj, std::size_t stride = 1);

}  // namespace qlink::iosim
