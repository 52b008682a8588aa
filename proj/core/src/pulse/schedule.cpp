#include "qlink/pulse/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qlink/error.hpp"
#include "qlink/units.hpp"
#include "qlink/util/csv.hpp"

namespace qlink::pulse {

double PulseSchedule::dt() const { return t.size() < 2 ? 0.0 : t[1] - t[0]; }

void PulseSchedule::validate() const {
  if (t.size() < 2) throw ConfigError("schedule: need at least two samples");
  if (kappa.size() != t.size()) throw ConfigError("schedule: kappa and time grid differ in length");
  if (!delta_omega_comp.empty() && delta_omega_comp.size() != t.size()) {
    throw ConfigError("schedule: compensation and time grid differ in length");
  }
  if (!flux.empty() && flux.size() != t.size()) {
    throw ConfigError("schedule: flux and time grid differ in length");
  }
  for (std::size_t i = 0; i < kappa.size(); ++i) {
    if (!(kappa[i] >= 0.0) || !std::isfinite(kappa[i])) {
      throw ConfigError("schedule: kappa must be finite and >= 0 (sample " + std::to_string(i) + ")");
    }
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("schedule: alpha must lie in [0, 1]");
}

std::vector<double> make_grid(double window, double dt) {
  if (!(dt > 0.0)) throw InvalidParameter("grid: dt must be positive");
  if (!(window > 0.0)) throw InvalidParameter("grid: window must be positive");
  auto n = static_cast<std::size_t>(std::ceil(window / dt - 1e-9));
  if (n % 2) ++n;
  std::vector<double> t(n + 1);
  for (std::size_t i = 0; i <= n; ++i) t[i] = static_cast<double>(i) * dt;
  return t;
}

double logistic_rate(double kappa_c, double x) { return kappa_c / (1.0 + std::exp(-kappa_c * x)); }

double logistic_lead(double kappa_c) {
  if (!(kappa_c > 0.0)) throw InvalidParameter("logistic: kappa_c must be positive");
  return std::log(999.0) / kappa_c;
}

double shaped_window(double kappa_c, double tau_st) { return 2.0 * logistic_lead(kappa_c) + tau_st; }

namespace {

void check_cap(double kappa_c, double kappa_max, const char* who) {
  if (kappa_max > 0.0 && kappa_c > kappa_max * (1.0 + 1e-12)) {
    throw InvalidParameter(std::string(who) + ": kappa_c exceeds the coupler maximum; refusing to clamp");
  }
}

}  // namespace

SchedulePair shaped_schedules(double kappa_c, double tau_st, double window, double dt,
                              double kappa_max_a, double kappa_max_b) {
  if (!(kappa_c > 0.0)) throw InvalidParameter("shaped schedule: kappa_c must be positive");
  if (!(tau_st > 0.0)) throw InvalidParameter("shaped schedule: tau_st must be positive");
  check_cap(kappa_c, kappa_max_a, "shaped schedule (sender)");
  check_cap(kappa_c, kappa_max_b, "shaped schedule (receiver)");
  const double lead = logistic_lead(kappa_c);
  const double need = 2.0 * lead + tau_st;
  if (window < need * (1.0 - 1e-12)) {
    throw ConfigError("shaped schedule: window shorter than emission plus mirrored absorption (" +
                      std::to_string(need * 1e9) + " ns)");
  }

  SchedulePair p;
  p.sender.t = make_grid(window, dt);
  p.receiver.t = p.sender.t;
  const std::size_t n = p.sender.t.size();
  p.sender.kappa.resize(n);
  p.receiver.kappa.resize(n);
  auto rising = [&](double t) { return t >= 0.0 ? logistic_rate(kappa_c, t - lead) : 0.0; };
  for (std::size_t i = 0; i < n; ++i) {
    const double t = p.sender.t[i];
    p.sender.kappa[i] = rising(t);
    p.receiver.kappa[i] = rising(need - t);
  }
  p.sender.kappa_c = p.receiver.kappa_c = kappa_c;
  return p;
}

PulseSchedule fractional_schedule(double kappa_c, double alpha, double window, double dt,
                                  double kappa_max) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidParameter("fractional schedule: alpha must lie in (0, 1]");
  if (!(kappa_c > 0.0)) throw InvalidParameter("fractional schedule: kappa_c must be positive");
  check_cap(kappa_c, kappa_max, "fractional schedule");
  const double lead = logistic_lead(kappa_c);
  PulseSchedule s;
  s.t = make_grid(window, dt);
  s.kappa.resize(s.t.size());
  for (std::size_t i = 0; i < s.t.size(); ++i) {
    const double e = std::exp(-kappa_c * (s.t[i] - lead));
    s.kappa[i] = kappa_c * alpha * e / ((e + 1.0 - alpha) * (e + 1.0));
  }
  s.kappa_c = kappa_c;
  s.alpha = alpha;
  return s;
}

PulseSchedule constant_schedule(double kappa, double window, double dt) {
  if (!(kappa >= 0.0)) throw InvalidParameter("constant schedule: kappa must be >= 0");
  PulseSchedule s;
  s.t = make_grid(window, dt);
  s.kappa.assign(s.t.size(), kappa);
  s.kappa_c = kappa;
  return s;
}

PulseSchedule off_schedule(double window, double dt) { return constant_schedule(0.0, window, dt); }

PulseSchedule distort(const PulseSchedule& sched, const PulseDistortion& d) {
  if (!(d.kappa_scale >= 0.0)) throw InvalidParameter("distortion: kappa scale must be >= 0");
  PulseSchedule out = sched;
  out.flux.clear();
  out.delta_omega_comp.clear();
  const std::size_t n = sched.size();
  const double dt = sched.dt();
  const long shift = dt > 0.0 ? std::lround(d.timing_skew / dt) : 0;
  for (std::size_t i = 0; i < n; ++i) {
    const long src = static_cast<long>(i) - shift;
    double k;
    if (src < 0) k = 0.0;
    else if (src >= static_cast<long>(n)) k = sched.kappa.back();
    else k = sched.kappa[static_cast<std::size_t>(src)];
    out.kappa[i] = d.kappa_scale * k;
  }
  return out;
}

double chain_kappa_max(const device::CouplerParams& coupler, const device::QubitParams& qubit,
                       double Z0) {
  return device::kappa_at_flux(coupler, qubit, Z0, 0.5);
}

std::vector<double> kappa_to_flux(const PulseSchedule& sched, const device::CouplerParams& coupler,
                                  const device::QubitParams& qubit, double Z0) {
  coupler.validate();
  const double kmax = chain_kappa_max(coupler, qubit, Z0);
  const double a = 2.0 * coupler.L_g + coupler.L_w;
  const double lg2 = coupler.L_g * coupler.L_g;
  std::vector<double> flux(sched.kappa.size());
  for (std::size_t i = 0; i < sched.kappa.size(); ++i) {
    double k = sched.kappa[i];
    if (!(k >= 0.0)) throw InvalidParameter("kappa_to_flux: negative rate at sample " + std::to_string(i));
    if (k > kmax * (1.0 + 1e-12)) {
      throw OutOfRange("kappa_to_flux: sample " + std::to_string(i) + " asks for " +
                           std::to_string(k * 1e-9) + "/ns, above the coupler maximum " +
                           std::to_string(kmax * 1e-9) + "/ns",
                       i);
    }
    k = std::min(k, kmax);
    const double m = -std::sqrt(k * (qubit.L_J + coupler.L_g) * Z0) / qubit.omega_idle;
    const double c = std::clamp(m * coupler.L_T / (lg2 - m * a), -1.0, 0.0);
    flux[i] = device::phase_to_flux(coupler, std::acos(c));
  }
  return flux;
}

std::vector<double> flux_to_kappa(const std::vector<double>& flux,
                                  const device::CouplerParams& coupler,
                                  const device::QubitParams& qubit, double Z0) {
  std::vector<double> k(flux.size());
  for (std::size_t i = 0; i < flux.size(); ++i) k[i] = device::kappa_at_flux(coupler, qubit, Z0, flux[i]);
  return k;
}

std::vector<double> compensation_schedule(const PulseSchedule& sched,
                                          const device::QubitParams& qubit,
                                          const device::CouplerParams& coupler, double Z0) {
  std::vector<double> out(sched.kappa.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = -device::qubit_freq_shift(sched.kappa[i], Z0, qubit.L_J, coupler.L_g);
  }
  return out;
}

std::vector<double> induced_shift(const PulseSchedule& sched, const device::QubitParams& qubit,
                                  const device::CouplerParams& coupler, double Z0) {
  std::vector<double> out(sched.kappa.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = device::qubit_freq_shift(sched.kappa[i], Z0, qubit.L_J, coupler.L_g);
  }
  return out;
}

KappaFluxTable::KappaFluxTable(std::vector<double> flux, std::vector<double> kappa)
    : flux_(std::move(flux)), kappa_(std::move(kappa)) {
  if (flux_.size() != kappa_.size() || flux_.size() < 2) {
    throw InvalidParameter("kappa table: need at least two (flux, kappa) rows");
  }
  for (std::size_t i = 1; i < flux_.size(); ++i) {
    if (!(flux_[i] > flux_[i - 1]) || !(kappa_[i] > kappa_[i - 1])) {
      throw InvalidParameter("kappa table: flux and kappa must both increase (row " +
                             std::to_string(i + 1) + ")");
    }
  }
  if (kappa_.front() < 0.0) throw InvalidParameter("kappa table: negative rate");
}

KappaFluxTable KappaFluxTable::load_csv(const std::string& path) {
  const auto rows = read_csv(path);
  const auto fcol = rows.column("flux");
  const auto kcol = rows.column("kappa_per_ns");
  std::vector<double> f, k;
  for (const auto& r : rows.rows) {
    f.push_back(r[fcol]);
    k.push_back(r[kcol] * 1e9);
  }
  return KappaFluxTable(std::move(f), std::move(k));
}

namespace {

double interp(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t j = static_cast<std::size_t>(it - xs.begin());
  const double w = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
  return ys[j - 1] + w * (ys[j] - ys[j - 1]);
}

}  // namespace

double KappaFluxTable::kappa_at(double flux) const { return interp(flux_, kappa_, flux); }

double KappaFluxTable::flux_at(double kappa) const {
  if (kappa < kappa_.front() || kappa > kappa_.back() * (1.0 + 1e-12)) {
    throw OutOfRange("kappa table: rate outside the tabulated range", 0);
  }
  return interp(kappa_, flux_, kappa);
}

std::vector<double> kappa_to_flux(const PulseSchedule& sched, const KappaFluxTable& table) {
  std::vector<double> flux(sched.kappa.size());
  for (std::size_t i = 0; i < flux.size(); ++i) {
    const double k = sched.kappa[i];
    if (k > table.kappa_max() * (1.0 + 1e-12)) {
      throw OutOfRange("kappa_to_flux: sample " + std::to_string(i) + " above the table maximum", i);
    }
    flux[i] = table.flux_at(std::clamp(k, table.kappa_min(), table.kappa_max()));
  }
  return flux;
}

void write_waveform_csv(const std::string& path, const PulseSchedule& sched) {
  CsvWriter w(path, {"t_ns", "kappa_per_ns", "delta_omega_comp_mhz", "flux"});
  for (std::size_t i = 0; i < sched.size(); ++i) {
    w.row({sched.t[i] * 1e9, sched.kappa[i] * 1e-9,
           sched.delta_omega_comp.empty() ? 0.0 : sched.delta_omega_comp[i] / (kTwoPi * 1e6),
           sched.flux.empty() ? std::nan("") : sched.flux[i]});
  }
}

}  // namespace qlink::pulse
