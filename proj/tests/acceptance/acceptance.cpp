// One line per acceptance criterion; nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "gen.hpp"
#include "qlink/device/device_params.hpp"
#include "qlink/iosim/pitch_catch.hpp"
#include "qlink/multimode/multimode.hpp"
#include "qlink/protocol/analysis.hpp"
#include "qlink/protocol/budget.hpp"
#include "qlink/pulse/calibration.hpp"
#include "qlink/tomography/tomography.hpp"
#include "qlink/units.hpp"

using namespace qlink;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double limit_s;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool within(double x, double lo, double hi) { return x >= lo && x <= hi; }

const double kKappaC = 1.0 / 22e-9;

device::DeviceParams dev() { return device::DeviceParams::defaults(); }

// 1. Golden-rule and circuit routes to the emission rate.
Outcome chain_identity() {
  prop::Gen g(101);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double Lg = g.log_uniform(0.05e-9, 1e-9);
    const double LJ = g.log_uniform(2e-9, 40e-9);
    const double wq = kTwoPi * g.uniform(3e9, 8e9);
    const double M = g.log_uniform(1e-13, 5e-11);
    device::CableParams c;
    c.length = g.log_uniform(0.1, 200.0);
    c.specific_inductance = g.log_uniform(100e-9, 800e-9);
    c.specific_capacitance = g.log_uniform(40e-12, 200e-12);
    c.T1_mode = 50e-6;
    const auto d = device::cable_derived_params(c);
    const double gj = device::jc_coupling(M, wq, wq, LJ, Lg, d.L_m);
    const double k15 = device::emission_rate_from_coupling(gj, d.omega_fsr);
    const double k17 = device::emission_rate_from_inductance(M, wq, LJ, Lg, d.Z0);
    worst = std::max(worst, std::abs(k15 - k17) / k17);
  }
  return {worst < 1e-12, fmt("max relative difference %.2e over 1000 sets", worst)};
}

// 2. Cable constants against the transmission-line formulas.
Outcome cable_constants() {
  device::CableParams c;
  c.length = 64.0;
  c.specific_inductance = 200e-9;
  c.specific_capacitance = 86.5e-12;
  c.T1_mode = 56.2e-6;
  const auto d = device::cable_derived_params(c);
  const double tau = 64.0 * std::sqrt(200e-9 * 86.5e-12);
  const double fsr_mhz = angular_to_hz(d.omega_fsr) / 1e6;
  const double loss = 1.0 - std::exp(-tau / 56.2e-6);
  const bool pass = within(fsr_mhz, 1.855, 1.895) && within(d.tau_st, 262e-9, 268e-9) &&
                    within(d.per_transit_loss, 0.0044, 0.0050) &&
                    std::abs(d.tau_st - tau) < 1e-18 && std::abs(d.per_transit_loss - loss) < 1e-15 &&
                    std::abs(fsr_mhz - 1.0 / (2.0 * tau) / 1e6) < 1e-12;
  return {pass, fmt("FSR %.4f MHz, tau %.2f ns, loss %.3f%%", fsr_mhz, d.tau_st * 1e9,
                    100 * d.per_transit_loss)};
}

// 3. Chevron and stripe regimes at 201 modes, 300 times, 100 detunings.
Outcome chevrons() {
  const auto cable = device::cable_derived_params(dev().cable);
  multimode::ChevronConfig cfg;
  cfg.omega_fsr = cable.omega_fsr;
  cfg.half_width = 100;
  for (int i = 0; i < 100; ++i) cfg.detunings.push_back(hz_to_angular(-5e6 + 10e6 * i / 99.0));

  using clock = std::chrono::steady_clock;
  cfg.g = hz_to_angular(0.08e6);
  for (int i = 0; i < 300; ++i) cfg.times.push_back(5e-6 * i / 299.0);
  const auto t0 = clock::now();
  const auto weak = multimode::chevron_scan(cfg);
  const double t_weak = std::chrono::duration<double>(clock::now() - t0).count();
  const auto centres = multimode::chevron_centres(weak);
  const double spacing = multimode::chevron_spacing(weak) / cable.omega_fsr;
  double off_mode = 0.0;
  for (double x : centres) off_mode = std::max(off_mode, std::abs(x / cable.omega_fsr - std::round(x / cable.omega_fsr)));

  cfg.g = hz_to_angular(1.63e6);
  cfg.times.clear();
  for (int i = 0; i < 300; ++i) cfg.times.push_back(1.2e-6 * i / 299.0);
  const auto t1 = clock::now();
  const auto strong = multimode::chevron_scan(cfg);
  const double t_strong = std::chrono::duration<double>(clock::now() - t1).count();
  std::size_t row = 0;
  for (std::size_t i = 1; i < strong.axis_detuning.size(); ++i) {
    if (std::abs(strong.axis_detuning[i]) < std::abs(strong.axis_detuning[row])) row = i;
  }
  std::vector<double> p(cfg.times.size());
  for (std::size_t j = 0; j < p.size(); ++j) p[j] = strong.p1(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(j));
  const double onset = multimode::revival_onset(cfg.times, p, cable.tau_st);

  const bool pass = centres.size() >= 2 && std::abs(spacing - 1.0) < 0.02 && off_mode < 0.05 &&
                    within(onset, 515e-9, 545e-9) && t_weak < 120 && t_strong < 120;
  return {pass, fmt("weak: %zu chevrons, spacing %.4f FSR (%.1f s); strong: stripe at %.1f ns (%.1f s)",
                    centres.size(), spacing, t_weak, onset * 1e9, t_strong)};
}

// 4. Input-output model against the mode ladder for constant strong coupling.
Outcome engine_agreement() {
  const auto cable = device::cable_derived_params(dev().cable);
  const double g = hz_to_angular(1.63e6);
  std::vector<double> ts;
  for (int i = 0; i <= 800; ++i) ts.push_back(3 * cable.tau_st * i / 800.0);
  const auto ladder = multimode::resonant_ladder(g, cable.omega_fsr, 100, ts);
  const double kappa = device::emission_rate_from_coupling(g, cable.omega_fsr);
  iosim::ChannelParams ch;
  ch.tau_st = cable.tau_st;
  const double dt = iosim::aligned_step(ch.tau_st);
  iosim::NodeDrive a;
  a.schedule = pulse::constant_schedule(kappa, 3 * cable.tau_st, dt);
  const auto io = iosim::simulate_free_emission(a, ch);
  double s = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const auto k = std::min(io.size() - 1, static_cast<std::size_t>(std::llround(ts[i] / dt)));
    const double e = ladder.populations(static_cast<Eigen::Index>(i), 0) - std::norm(io.sigma2[k]);
    s += e * e;
  }
  const double rms = std::sqrt(s / static_cast<double>(ts.size()));
  return {rms < 0.02, fmt("RMS population difference %.4f", rms)};
}

iosim::PitchCatchSetup shaped_setup() {
  iosim::PitchCatchSetup s;
  s.channel.tau_st = device::cable_derived_params(dev().cable).tau_st;
  const double dt = iosim::aligned_step(s.channel.tau_st);
  const auto p = pulse::shaped_schedules(kKappaC, s.channel.tau_st,
                                         pulse::shaped_window(kKappaC, s.channel.tau_st), dt);
  s.a.schedule = p.sender;
  s.b.schedule = p.receiver;
  return s;
}

// 5. Time-reversal transfer, lossless.
Outcome shaped_transfer() {
  const double eff = iosim::transfer_efficiency(iosim::simulate_pitch_catch(shaped_setup()));
  return {eff >= 0.995, fmt("efficiency %.5f", eff)};
}

// 6. Best constant coupling.
Outcome fixed_coupling() {
  iosim::ChannelParams ch;
  ch.tau_st = device::cable_derived_params(dev().cable).tau_st;
  const auto res = iosim::fixed_coupling_optimum(ch, iosim::flying_kappa_grid(ch.tau_st, 5, 100, 50));
  return {within(res.best_efficiency, 0.53, 0.55),
          fmt("max absorption %.2f%% at kappa*tau %.2f", 100 * res.best_efficiency, res.best_kappa * ch.tau_st)};
}

// 7. Receiver detuned by 2 MHz.
Outcome mismatch() {
  const auto c = iosim::mismatch_scan(shaped_setup(), {2e6});
  return {within(c.y[0], 0.19, 0.25), fmt("inefficiency %.2f%% at 2 MHz", 100 * c.y[0])};
}

// 8. Fractional emission and the calibration classifier.
Outcome fractional() {
  pulse::CalibrationConfig cfg;
  cfg.kappa_c = kKappaC;
  cfg.channel = iosim::ChannelParams::from_cable(dev().cable);
  double worst = 0.0;
  for (int k = 1; k <= 9; ++k) {
    const double a = 0.1 * k;
    const double r = pulse::fractional_residual(cfg.kappa_c, a, cfg);
    worst = std::max(worst, std::abs(r - (1 - a)) / (1 - a));
  }
  std::vector<double> grid;
  for (int k = 1; k <= 9; ++k) grid.push_back(0.1 * k);
  std::string verdicts;
  bool ok = true;
  for (auto [scale, expect] : {std::pair{0.8, pulse::CouplingVerdict::UnderCoupling},
                               std::pair{1.0, pulse::CouplingVerdict::Calibrated},
                               std::pair{1.2, pulse::CouplingVerdict::OverCoupling}}) {
    cfg.distortion.kappa_scale = scale;
    const auto v = pulse::calibration_scan(grid, cfg).verdict;
    ok = ok && v == expect;
    verdicts += fmt(" %.1f->%s", scale, pulse::to_string(v).c_str());
  }
  return {worst < 0.01 && ok, fmt("max relative residual error %.2e; verdicts%s", worst, verdicts.c_str())};
}

double bell_fidelity(const protocol::DensityMatrix& rho) {
  const auto psi = protocol::bell_target();
  return (psi.adjoint() * rho.matrix() * psi)(0, 0).real();
}

// 9. Remote Bell pair.
Outcome bell_pair() {
  const double ideal = bell_fidelity(protocol::entangle_remote(protocol::NoiseConfig::ideal()));
  const auto noise = protocol::NoiseConfig::paper_defaults();
  const double noisy = bell_fidelity(protocol::entangle_remote(noise));
  const auto stats = tomography::repeat_statistics(
      [&](Rng& rng) { return protocol::sampled_bell_fidelity(noise, 4096, rng); }, 40, 9);
  const bool pass = std::abs(ideal - 1.0) < 1e-10 && within(noisy, 0.92, 0.96) && within(stats.mean, 0.92, 0.96);
  return {pass, fmt("noiseless %.12f; default %.4f; 4096x40 sampled %.4f +- %.4f", ideal, noisy, stats.mean,
                    stats.stddev)};
}

// 10. State teleportation.
Outcome teleportation() {
  using protocol::TeleportMode;
  double worst = 0.0;
  for (auto mode : {TeleportMode::FeedForward, TeleportMode::PostSelect}) {
    const auto p = protocol::teleport_process(mode, protocol::NoiseConfig::ideal());
    for (double f : p.branch_fidelity) worst = std::max(worst, std::abs(f - 1.0));
  }
  const auto noise = protocol::NoiseConfig::paper_defaults();
  const auto ff = protocol::teleport_process(TeleportMode::FeedForward, noise);
  const auto ps = protocol::teleport_process(TeleportMode::PostSelect, noise);
  const auto stats = tomography::repeat_statistics(
      [&](Rng& rng) { return protocol::sampled_teleport_fidelity(TeleportMode::FeedForward, noise, 4096, rng); },
      40, 10);
  const bool pass = worst < 1e-10 && within(ff.average, 0.74, 0.83) && within(ps.branch_fidelity[0], 0.77, 0.86) &&
                    within(stats.mean, 0.74, 0.83);
  return {pass, fmt("noiseless max dev %.1e; feed-forward %.4f (4096x40: %.4f +- %.4f); post-selected 00 %.4f",
                    worst, ff.average, stats.mean, stats.stddev, ps.branch_fidelity[0])};
}

// 11. CNOT teleportation.
Outcome cnot() {
  const double ideal = protocol::cnot_process(protocol::NoiseConfig::ideal()).fidelity;
  const double noisy = protocol::cnot_process(protocol::NoiseConfig::paper_defaults()).fidelity;
  return {std::abs(ideal - 1.0) < 1e-10 && within(noisy, 0.66, 0.75),
          fmt("noiseless %.12f; default %.4f", ideal, noisy)};
}

// 12. Tomography against exact data and Kraus oracles.
Outcome tomography_oracles() {
  using namespace tomography;
  prop::Gen g(112);
  double qst_err = 0.0, qpt_err = 0.0, kraus_err = 0.0, corr_err = 0.0;
  for (int c = 0; c < 50; ++c) {
    const int n = 1 + c % 2;
    const int d = 1 << n;
    const Matrix truth = g.density(d, 1 + c % d);
    qst_err = std::max(qst_err, prop::max_abs(qst(exact_data(DensityMatrix(truth), complete_settings(n))).matrix() - truth));

    const auto kraus = g.kraus(d, 1 + c % 3);
    const auto ins = standard_input_states(n);
    std::vector<Matrix> outs;
    for (const auto& in : ins) {
      Matrix o = Matrix::Zero(d, d);
      for (const auto& k : kraus) o += k * in.matrix() * k.adjoint();
      outs.push_back(o);
    }
    const Matrix oracle = chi_from_kraus(kraus).chi;
    kraus_err = std::max(kraus_err, prop::max_abs(qpt(ins, outs, false).chi - oracle));
    // Round trip: the reconstructed process regenerates its own outputs.
    const auto chi = qpt(ins, outs);
    for (std::size_t j = 0; j < ins.size(); ++j) {
      qpt_err = std::max(qpt_err, prop::max_abs(chi.apply(ins[j].matrix()) - outs[j]));
    }

    const auto C = g.confusion(d, 0.8);
    Eigen::VectorXd p(d);
    for (int k = 0; k < d; ++k) p(k) = g.uniform(0.05, 1.0);
    p /= p.sum();
    corr_err = std::max(corr_err, (readout_correct(C * p, C) - p).cwiseAbs().maxCoeff());
  }
  const bool pass = qst_err < 1e-10 && qpt_err < 1e-10 && kraus_err < 1e-8 && corr_err < 1e-12;
  return {pass, fmt("QST %.1e, QPT %.1e, Kraus oracle %.1e, readout %.1e", qst_err, qpt_err, kraus_err, corr_err)};
}

// 13. Inefficiency budget.
Outcome budget() {
  const auto b = protocol::inefficiency_budget(protocol::BudgetConfig::from_device(dev()));
  const double cable = b.item("cable loss");
  const double thermal = b.item("thermal photons");
  const double decoherence = b.item("qubit decoherence");
  const double joints = b.item("joint loss");
  const double residual = b.item("control pulse imperfection");
  const double tau = device::cable_derived_params(dev().cable).tau_st;
  const bool pass = std::abs(cable - (1 - std::exp(-tau / dev().cable.T1_mode))) < 1e-15 &&
                    within(cable, 0.0044, 0.0056) && std::abs(thermal - 0.013) < 1e-15 &&
                    within(decoherence, 0.009, 0.015) && within(joints, 0.009, 0.011) &&
                    std::abs(cable + thermal + decoherence + joints + residual - 0.096) < 1e-12 &&
                    within(residual, 0.0515, 0.0605);
  return {pass, fmt("cable %.2f%%, thermal %.2f%%, decoherence %.2f%%, joints %.2f%%, residual %.2f%%",
                    100 * cable, 100 * thermal, 100 * decoherence, 100 * joints, 100 * residual)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "circuit-chain identity", 1, chain_identity},
      {2, "cable constants", 1, cable_constants},
      {3, "chevron and stripe regimes", 240, chevrons},
      {4, "engine agreement", 60, engine_agreement},
      {5, "time-reversal transfer", 5, shaped_transfer},
      {6, "fixed-coupling cap", 120, fixed_coupling},
      {7, "mismatch sensitivity", 60, mismatch},
      {8, "fractional emission and calibration", 60, fractional},
      {9, "remote Bell pair", 10, bell_pair},
      {10, "state teleportation", 60, teleportation},
      {11, "CNOT teleportation", 120, cnot},
      {12, "tomography oracles", 30, tomography_oracles},
      {13, "inefficiency budget", 60, budget},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = o.pass && secs < c.limit_s;
    if (!pass) ++failed;
    std::printf("%s %2d %-36s %s [%.2f s / %.0f s]\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                o.detail.c_str(), secs, c.limit_s);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
