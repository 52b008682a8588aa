#include "qlink/iosim/pitch_catch.hpp"

#include <algorithm>
#include <cmath>

#include "qlink/error.hpp"
#include "qlink/units.hpp"
#include "qlink/util/csv.hpp"
#include "qlink/util/curve_fit.hpp"
#include "qlink/util/parallel.hpp"

namespace qlink::iosim {

void ChannelParams::validate() const {
  if (!(tau_st > 0.0)) throw ConfigError("channel: tau_st must be positive");
  if (!(eta >= 0.0 && eta <= 1.0)) throw ConfigError("channel: eta must lie in [0, 1]");
  if (!(thermal_population >= 0.0 && thermal_population <= 1.0)) {
    throw ConfigError("channel: thermal population must lie in [0, 1]");
  }
}

ChannelParams ChannelParams::from_cable(const device::CableParams& cable) {
  const auto d = device::cable_derived_params(cable);
  ChannelParams c;
  c.tau_st = d.tau_st;
  c.eta = (1.0 - d.per_transit_loss) * device::joint_transmission(cable);
  c.thermal_population = cable.thermal_population;
  return c;
}

double aligned_step(double tau_st, double dt_max) {
  if (!(tau_st > 0.0) || !(dt_max > 0.0)) throw InvalidParameter("aligned_step: inputs must be positive");
  double n = std::max(2.0, std::ceil(tau_st / dt_max - 1e-9));
  if (std::fmod(n, 2.0) != 0.0) n += 1.0;
  return tau_st / n;
}

namespace {

std::vector<double> detuning_series(const NodeDrive& d, std::size_t n, const char* who) {
  std::vector<double> out(n, d.detuning_offset);
  if (!d.detuning.empty()) {
    if (d.detuning.size() != n) {
      throw ConfigError(std::string(who) + ": detuning series and schedule differ in length");
    }
    for (std::size_t i = 0; i < n; ++i) out[i] += d.detuning[i];
  }
  return out;
}

}  // namespace

IOTrajectory simulate_pitch_catch(const PitchCatchSetup& s) {
  s.channel.validate();
  s.a.schedule.validate();
  s.b.schedule.validate();
  const std::size_t n = s.a.schedule.size();
  if (s.b.schedule.size() != n) throw ConfigError("pitch-catch: schedules differ in length");
  const double dt = s.a.schedule.dt();
  if (std::abs(s.b.schedule.dt() - dt) > 1e-12 * dt) {
    throw ConfigError("pitch-catch: schedules use different steps");
  }
  const double ratio = s.channel.tau_st / dt;
  const double D_real = std::round(ratio);
  if (std::abs(ratio - D_real) > 1e-6) {
    throw ConfigError("pitch-catch: dt = " + std::to_string(dt * 1e9) +
                      " ns does not divide tau_st = " + std::to_string(s.channel.tau_st * 1e9) + " ns");
  }
  const auto D = static_cast<std::size_t>(D_real);
  if (D < 2 || D % 2) {
    throw ConfigError("pitch-catch: tau_st / dt must be an even integer >= 2, got " + std::to_string(D));
  }
  if ((n - 1) % 2) throw ConfigError("pitch-catch: grid needs an even number of intervals");
  for (auto T1 : {s.a.T1, s.b.T1}) {
    if (T1 && !(*T1 > 0.0)) throw ConfigError("pitch-catch: T1 must be positive");
  }

  IOTrajectory tr;
  tr.t = s.a.schedule.t;
  tr.kappaA = s.a.schedule.kappa;
  tr.kappaB = s.b.schedule.kappa;
  tr.delay_samples = D;
  tr.init = s.init;
  tr.sigma2.assign(n, 0.0);
  tr.sigma3.assign(n, 0.0);
  tr.a_out2.assign(n, 0.0);
  tr.a_out3.assign(n, 0.0);
  tr.a_in2.assign(n, 0.0);
  tr.a_in3.assign(n, 0.0);

  const auto det2 = detuning_series(s.a, n, "sender");
  const auto det3 = detuning_series(s.b, n, "receiver");
  const double g2 = s.a.T1 ? 0.5 / *s.a.T1 : 0.0;
  const double g3 = s.b.T1 ? 0.5 / *s.b.T1 : 0.0;
  const double seta = std::sqrt(s.channel.eta);
  std::vector<double> sk2(n), sk3(n);
  for (std::size_t i = 0; i < n; ++i) {
    sk2[i] = std::sqrt(tr.kappaA[i]);
    sk3[i] = std::sqrt(tr.kappaB[i]);
  }

  // Fields switch on abruptly at t = 0 and the jump is echoed every transit,
  // always on a macro-step boundary since D is even. Stages ending a step use
  // the left limit of the delayed field, stages starting one the right limit.
  tr.a_out2_left.assign(n, 0.0);
  tr.a_out3_left.assign(n, 0.0);
  auto& left2 = tr.a_out2_left;
  auto& left3 = tr.a_out3_left;
  auto ain2 = [&](std::size_t j) { return j >= D ? seta * tr.a_out3[j - D] : cdouble{}; };
  auto ain3 = [&](std::size_t j) { return j >= D ? seta * tr.a_out2[j - D] : cdouble{}; };
  auto ain2_left = [&](std::size_t j) { return j >= D ? seta * left3[j - D] : cdouble{}; };
  auto ain3_left = [&](std::size_t j) { return j >= D ? seta * left2[j - D] : cdouble{}; };
  auto f2 = [&](cdouble x, std::size_t j, cdouble in) {
    return cdouble(-(0.5 * tr.kappaA[j] + g2), -det2[j]) * x + sk2[j] * in;
  };
  auto f3 = [&](cdouble x, std::size_t j, cdouble in) {
    return cdouble(-(0.5 * tr.kappaB[j] + g3), -det3[j]) * x + sk3[j] * in;
  };
  auto outputs = [&](std::size_t j) {
    tr.a_in2[j] = ain2(j);
    tr.a_in3[j] = ain3(j);
    tr.a_out2[j] = sk2[j] * tr.sigma2[j] - tr.a_in2[j];
    tr.a_out3[j] = sk3[j] * tr.sigma3[j] - tr.a_in3[j];
    if (j > 0) {
      left2[j] = sk2[j] * tr.sigma2[j] - ain2_left(j);
      left3[j] = sk3[j] * tr.sigma3[j] - ain3_left(j);
    }
  };

  (s.init == Excited::Sender ? tr.sigma2 : tr.sigma3)[0] = s.amplitude;
  outputs(0);

  const double h = 2.0 * dt;
  auto step = [&](auto& f, cdouble x, std::size_t k, cdouble in0, cdouble in1, cdouble in2,
                  cdouble& slope0) {
    const cdouble k1 = f(x, k, in0);
    const cdouble k2 = f(x + dt * k1, k + 1, in1);
    const cdouble k3 = f(x + dt * k2, k + 1, in1);
    const cdouble k4 = f(x + h * k3, k + 2, in2);
    slope0 = k1;
    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  };

  for (std::size_t k = 0; k + 2 < n; k += 2) {
    cdouble d2, d3;
    const cdouble b2 = ain2_left(k + 2), b3 = ain3_left(k + 2);
    tr.sigma2[k + 2] = step(f2, tr.sigma2[k], k, ain2(k), ain2(k + 1), b2, d2);
    tr.sigma3[k + 2] = step(f3, tr.sigma3[k], k, ain3(k), ain3(k + 1), b3, d3);
    // Inputs at k+2 only reach back to k+2-D <= k, so the end slopes are known.
    const cdouble e2 = f2(tr.sigma2[k + 2], k + 2, b2);
    const cdouble e3 = f3(tr.sigma3[k + 2], k + 2, b3);
    tr.sigma2[k + 1] = 0.5 * (tr.sigma2[k] + tr.sigma2[k + 2]) + (h / 8.0) * (d2 - e2);
    tr.sigma3[k + 1] = 0.5 * (tr.sigma3[k] + tr.sigma3[k + 2]) + (h / 8.0) * (d3 - e3);
    outputs(k + 1);
    outputs(k + 2);
  }
  return tr;
}

std::vector<double> IOTrajectory::in_flight() const {
  const std::size_t n = size();
  const std::size_t D = delay_samples;
  std::vector<double> fr(n), fl(n), cum(n, 0.0), out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    fr[i] = std::norm(a_out2[i]) + std::norm(a_out3[i]);
    fl[i] = std::norm(a_out2_left[i]) + std::norm(a_out3_left[i]);
  }
  const double h = dt();
  // Simpson on the even samples, where every field jump sits; the odd ends
  // of a window get one trapezoid panel each.
  for (std::size_t e = 2; e < n; e += 2) {
    cum[e] = cum[e - 2] + h / 3.0 * (fr[e - 2] + 4.0 * fr[e - 1] + fl[e]);
  }
  auto panel = [&](std::size_t a) { return 0.5 * h * (fr[a] + fl[a + 1]); };
  for (std::size_t i = 0; i < n; ++i) {
    if (i % 2 == 0) {
      out[i] = i >= D ? cum[i] - cum[i - D] : cum[i];
    } else if (i > D) {
      out[i] = cum[i - 1] - cum[i - D + 1] + panel(i - D) + panel(i - 1);
    } else {
      out[i] = cum[i - 1] + panel(i - 1);
    }
  }
  return out;
}

double transfer_efficiency_at(const IOTrajectory& tr, std::size_t index) {
  if (index >= tr.size()) throw InvalidParameter("transfer efficiency: index past the trajectory");
  const bool fwd = tr.init == Excited::Sender;
  const double p0 = std::norm(fwd ? tr.sigma2[0] : tr.sigma3[0]);
  if (!(p0 > 0.0)) throw InvalidParameter("transfer efficiency: zero initial amplitude");
  return std::norm(fwd ? tr.sigma3[index] : tr.sigma2[index]) / p0;
}

double transfer_efficiency(const IOTrajectory& tr) {
  if (tr.size() == 0) throw InvalidParameter("transfer efficiency: empty trajectory");
  return transfer_efficiency_at(tr, tr.size() - 1);
}

IOTrajectory simulate_free_emission(const NodeDrive& sender, const ChannelParams& channel) {
  PitchCatchSetup s;
  s.a = sender;
  s.b.schedule.t = sender.schedule.t;
  s.b.schedule.kappa.assign(sender.schedule.size(), 0.0);
  s.channel = channel;
  return simulate_pitch_catch(s);
}

Curve mismatch_scan(const PitchCatchSetup& base, const std::vector<double>& mismatch_hz, int workers) {
  Curve c;
  c.x = mismatch_hz;
  c.y.assign(mismatch_hz.size(), 0.0);
  parallel_for(mismatch_hz.size(), workers, [&](std::size_t i) {
    PitchCatchSetup s = base;
    s.b.detuning_offset += kTwoPi * mismatch_hz[i];
    c.y[i] = 1.0 - transfer_efficiency(simulate_pitch_catch(s));
  });
  return c;
}

std::vector<EmissionPoint> static_emission_scan(const device::CouplerParams& coupler,
                                                const device::QubitParams& qubit,
                                                const device::CableParams& cable,
                                                const std::vector<double>& flux_grid,
                                                double dt_max, int workers) {
  const auto derived = device::cable_derived_params(cable);
  ChannelParams ch = ChannelParams::from_cable(cable);
  const double dt = aligned_step(ch.tau_st, dt_max);
  std::vector<EmissionPoint> out(flux_grid.size());
  parallel_for(flux_grid.size(), workers, [&](std::size_t i) {
    const double flux = flux_grid[i];
    if (!(flux >= -0.5 && flux <= 0.5)) throw InvalidParameter("emission scan: flux outside [-0.5, 0.5]");
    EmissionPoint p;
    p.flux = flux;
    p.kappa_model = device::kappa_at_flux(coupler, qubit, derived.Z0, flux);
    NodeDrive a;
    a.schedule = pulse::constant_schedule(p.kappa_model, 2.0 * ch.tau_st, dt);
    const auto tr = simulate_free_emission(a, ch);
    // Fit strictly before the first echo returns.
    std::vector<double> xs, ys;
    const std::size_t stop = 2 * tr.delay_samples;
    const std::size_t stride = std::max<std::size_t>(1, stop / 400);
    for (std::size_t k = 0; k < stop; k += stride) {
      xs.push_back(tr.t[k]);
      ys.push_back(std::norm(tr.sigma2[k]));
    }
    // Below ~1e-3 decay over the window the ringdown is indistinguishable
    // from flat at realistic readout precision.
    if (p.kappa_model * 2.0 * ch.tau_st < 1e-3) {
      p.below_detection = true;
      out[i] = p;
      return;
    }
    Eigen::VectorXd p0(2);
    p0 << 1.0, p.kappa_model * 1e-9;
    try {
      const auto fit = curve_fit(
          [](double t, const Eigen::VectorXd& q) { return q[0] * std::exp(-q[1] * 1e9 * t); }, xs, ys, p0);
      p.kappa_fit = fit.params[1] * 1e9;
      p.kappa_fit_error = fit.errors[1] * 1e9;
      p.below_detection = !(p.kappa_fit > 3.0 * p.kappa_fit_error);
    } catch (const FitError&) {
      p.below_detection = true;
    }
    out[i] = p;
  });
  return out;
}

std::vector<double> flying_kappa_grid(double tau_st, double lo, double hi, int n) {
  if (!(lo > 0.0 && hi > lo) || n < 2) throw InvalidParameter("kappa grid: need 0 < lo < hi and n >= 2");
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) {
    g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)) / tau_st;
  }
  return g;
}

FixedCouplingResult fixed_coupling_optimum(const ChannelParams& channel,
                                           const std::vector<double>& kappa_grid, double dt_max,
                                           int workers) {
  channel.validate();
  FixedCouplingResult r;
  r.kappa = kappa_grid;
  r.efficiency.assign(kappa_grid.size(), 0.0);
  r.cutoff.assign(kappa_grid.size(), 0.0);
  const double dt = aligned_step(channel.tau_st, dt_max);
  parallel_for(kappa_grid.size(), workers, [&](std::size_t i) {
    PitchCatchSetup s;
    s.a.schedule = pulse::constant_schedule(kappa_grid[i], 3.0 * channel.tau_st, dt);
    s.b.schedule = s.a.schedule;
    s.channel = channel;
    const auto tr = simulate_pitch_catch(s);
    const std::size_t stop = std::min(tr.size(), 3 * tr.delay_samples);
    for (std::size_t k = 0; k < stop; ++k) {
      const double e = std::norm(tr.sigma3[k]);
      if (e > r.efficiency[i]) {
        r.efficiency[i] = e;
        r.cutoff[i] = tr.t[k];
      }
    }
  });
  for (std::size_t i = 0; i < kappa_grid.size(); ++i) {
    if (r.efficiency[i] > r.best_efficiency) {
      r.best_efficiency = r.efficiency[i];
      r.best_kappa = kappa_grid[i];
      r.best_cutoff = r.cutoff[i];
    }
  }
  return r;
}

void write_trajectory_csv(const std::string& path, const IOTrajectory& tr, std::size_t stride) {
  if (stride == 0) stride = 1;
  CsvWriter w(path, {"t_ns", "re_sigma2", "im_sigma2", "re_sigma3", "im_sigma3", "p_out2_per_ns",
                     "p_out3_per_ns", "kappa_a_per_ns", "kappa_b_per_ns"});
  for (std::size_t i = 0; i < tr.size(); i += stride) {
    w.row({tr.t[i] * 1e9, tr.sigma2[i].real(), tr.sigma2[i].imag(), tr.sigma3[i].real(),
           tr.sigma3[i].imag(), std::norm(tr.a_out2[i]) * 1e-9, std::norm(tr.a_out3[i]) * 1e-9,
           tr.kappaA[i] * 1e-9, tr.kappaB[i] * 1e-9});
  }
}

}  // namespace qlink::iosim
