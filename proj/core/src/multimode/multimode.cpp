#include "qlink/multimode/multimode.hpp"

#include <cmath>
#include <fstream>

#include "json.hpp"

#include "qlink/error.hpp"
#include "qlink/util/csv.hpp"
#include "qlink/util/curve_fit.hpp"
#include "qlink/util/parallel.hpp"

namespace qlink::multimode {

using cdouble = std::complex<double>;

void MultimodeSpec::validate() const {
  if (qubits.empty()) throw InvalidParameter("multimode: need at least one qubit");
  if (m_hi < m_lo) throw InvalidParameter("multimode: empty mode range");
  if (!(omega_fsr > 0.0)) throw InvalidParameter("multimode: omega_fsr must be positive");
  for (const auto& q : qubits) {
    if (!q.coupling) throw InvalidParameter("multimode: qubit without a coupling function");
  }
}

std::function<double(int)> uniform_coupling(double g) {
  return [g](int) { return g; };
}

Eigen::MatrixXd build_hamiltonian(const MultimodeSpec& spec) {
  spec.validate();
  const int nq = static_cast<int>(spec.qubits.size());
  const int dim = spec.dim();
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
  for (int i = 0; i < nq; ++i) H(i, i) = spec.qubits[i].detuning;
  for (int m = spec.m_lo; m <= spec.m_hi; ++m) {
    const int j = nq + (m - spec.m_lo);
    H(j, j) = spec.mode_detuning(m);
    for (int i = 0; i < nq; ++i) {
      const auto& q = spec.qubits[i];
      double g = q.coupling(m);
      if (!std::isfinite(g)) throw InvalidParameter("multimode: non-finite coupling");
      if (q.side == CableEnd::Far && (m % 2 != 0)) g = -g;
      H(i, j) = g;
      H(j, i) = g;
    }
  }
  return H;
}

std::vector<std::string> basis_labels(const MultimodeSpec& spec) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < spec.qubits.size(); ++i) out.push_back("q" + std::to_string(i));
  for (int m = spec.m_lo; m <= spec.m_hi; ++m) out.push_back("m" + std::to_string(m));
  return out;
}

StateVector basis_state(int dim, int index) {
  if (index < 0 || index >= dim) throw InvalidParameter("basis_state: index out of range");
  StateVector v = StateVector::Zero(dim);
  v[index] = 1.0;
  return v;
}

namespace {

void check_grid(const std::vector<double>& t) {
  if (t.empty()) throw InvalidParameter("evolve: empty time grid");
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (!(t[i] >= t[i - 1])) throw InvalidParameter("evolve: time grid must be non-decreasing");
  }
}

Eigen::MatrixXcd propagator(const Eigen::MatrixXd& H, double dt) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  const Eigen::MatrixXd& V = es.eigenvectors();
  Eigen::VectorXcd phase(H.rows());
  for (Eigen::Index k = 0; k < H.rows(); ++k) phase[k] = std::exp(cdouble(0.0, -es.eigenvalues()[k] * dt));
  return V.cast<cdouble>() * phase.asDiagonal() * V.transpose().cast<cdouble>();
}

}  // namespace

Trajectory evolve(const Eigen::MatrixXd& H, const StateVector& psi0, const std::vector<double>& t_grid,
                  bool keep_states) {
  if (H.rows() != H.cols() || H.rows() != psi0.size()) throw DimensionMismatch("evolve: H and psi0 disagree");
  check_grid(t_grid);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  const Eigen::MatrixXd& V = es.eigenvectors();
  const Eigen::VectorXcd c0 = V.transpose().cast<cdouble>() * psi0;
  Trajectory tr;
  tr.t = t_grid;
  tr.populations.resize(static_cast<Eigen::Index>(t_grid.size()), H.rows());
  Eigen::VectorXcd c(H.rows());
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    for (Eigen::Index k = 0; k < H.rows(); ++k) {
      c[k] = c0[k] * std::exp(cdouble(0.0, -es.eigenvalues()[k] * t_grid[i]));
    }
    const StateVector psi = V.cast<cdouble>() * c;
    tr.populations.row(static_cast<Eigen::Index>(i)) = psi.cwiseAbs2().transpose();
    if (keep_states) tr.states.push_back(psi);
  }
  return tr;
}

Trajectory evolve_time_dependent(const std::function<Eigen::MatrixXd(double)>& H, const StateVector& psi0,
                                 const std::vector<double>& t_grid, double max_step, double tolerance,
                                 bool keep_states) {
  check_grid(t_grid);
  if (!(max_step > 0.0)) throw InvalidParameter("evolve: max_step must be positive");
  Trajectory tr;
  tr.t = t_grid;
  tr.populations.resize(static_cast<Eigen::Index>(t_grid.size()), psi0.size());
  StateVector psi = psi0;
  auto record = [&](std::size_t i) {
    tr.populations.row(static_cast<Eigen::Index>(i)) = psi.cwiseAbs2().transpose();
    if (keep_states) tr.states.push_back(psi);
  };
  record(0);
  bool checked = false;
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    const double span = t_grid[i] - t_grid[i - 1];
    if (span == 0.0) {
      record(i);
      continue;
    }
    const int sub = static_cast<int>(std::ceil(span / max_step - 1e-12));
    const double h = span / sub;
    for (int k = 0; k < sub; ++k) {
      const double t0 = t_grid[i - 1] + k * h;
      const Eigen::MatrixXd Hm = H(t0 + 0.5 * h);
      if (Hm.rows() != psi.size()) throw DimensionMismatch("evolve: H(t) dimension changed");
      const StateVector next = propagator(Hm, h) * psi;
      if (!checked) {
        const StateVector half = propagator(H(t0 + 0.75 * h), 0.5 * h) * (propagator(H(t0 + 0.25 * h), 0.5 * h) * psi);
        const double err = (half - next).norm();
        if (err > tolerance) {
          throw NumericalError("evolve: step " + std::to_string(h * 1e9) + " ns gives a step-doubling error of " +
                               std::to_string(err) + " (tolerance " + std::to_string(tolerance) +
                               "); reduce max_step");
        }
        checked = true;
      }
      psi = next;
    }
    record(i);
  }
  return tr;
}

MultimodeSpec chevron_spec(const ChevronConfig& cfg, double detuning) {
  MultimodeSpec s;
  s.omega_fsr = cfg.omega_fsr;
  s.m_lo = cfg.m0 - cfg.half_width;
  s.m_hi = cfg.m0 + cfg.half_width;
  s.rotating_frame_freq = cfg.m0 * cfg.omega_fsr;
  QubitSpec q;
  q.detuning = detuning;
  q.coupling = uniform_coupling(cfg.g);
  q.side = cfg.side;
  s.qubits.push_back(q);
  return s;
}

PopulationMap chevron_scan(const ChevronConfig& cfg) {
  if (cfg.detunings.empty() || cfg.times.empty()) throw InvalidParameter("chevron scan: empty axis");
  if (cfg.half_width < 0) throw InvalidParameter("chevron scan: negative mode window");
  PopulationMap map;
  map.axis_time = cfg.times;
  map.axis_detuning = cfg.detunings;
  map.p1.resize(static_cast<Eigen::Index>(cfg.detunings.size()), static_cast<Eigen::Index>(cfg.times.size()));
  parallel_for(cfg.detunings.size(), cfg.workers, [&](std::size_t i) {
    const auto spec = chevron_spec(cfg, cfg.detunings[i]);
    const auto tr = evolve(build_hamiltonian(spec), basis_state(spec.dim(), 0), cfg.times);
    map.p1.row(static_cast<Eigen::Index>(i)) = tr.populations.col(0).transpose();
  });
  return map;
}

std::vector<double> chevron_centres(const PopulationMap& map, double threshold) {
  const auto n = map.p1.rows();
  std::vector<double> loss(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) loss[static_cast<std::size_t>(i)] = 1.0 - map.p1.row(i).mean();
  std::vector<double> centres;
  for (std::size_t i = 1; i + 1 < loss.size(); ++i) {
    if (loss[i] > threshold && loss[i] >= loss[i - 1] && loss[i] > loss[i + 1]) {
      // Parabolic refinement through the three samples.
      const double a = loss[i - 1], b = loss[i], c = loss[i + 1];
      const double denom = a - 2.0 * b + c;
      const double shift = denom != 0.0 ? 0.5 * (a - c) / denom : 0.0;
      const double step = map.axis_detuning[i + 1] - map.axis_detuning[i];
      centres.push_back(map.axis_detuning[i] + shift * step);
    }
  }
  return centres;
}

double chevron_spacing(const PopulationMap& map, double threshold) {
  const auto c = chevron_centres(map, threshold);
  if (c.size() < 2) return std::nan("");
  return (c.back() - c.front()) / static_cast<double>(c.size() - 1);
}

double revival_onset(const std::vector<double>& t, const std::vector<double>& p1, double after, double fraction) {
  if (t.size() != p1.size()) throw DimensionMismatch("revival_onset: length mismatch");
  double peak = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] > after) peak = std::max(peak, p1[i]);
  }
  if (peak <= 0.0) return std::nan("");
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (t[i] > after && p1[i] >= fraction * peak) {
      // Linear interpolation of the crossing.
      const double lvl = fraction * peak;
      if (t[i - 1] > after && p1[i - 1] < lvl) {
        return t[i - 1] + (lvl - p1[i - 1]) / (p1[i] - p1[i - 1]) * (t[i] - t[i - 1]);
      }
      return t[i];
    }
  }
  return std::nan("");
}

Trajectory resonant_ladder(double g, double omega_fsr, int half_width, const std::vector<double>& times) {
  ChevronConfig cfg;
  cfg.g = g;
  cfg.omega_fsr = omega_fsr;
  cfg.half_width = half_width;
  const auto spec = chevron_spec(cfg, 0.0);
  return evolve(build_hamiltonian(spec), basis_state(spec.dim(), 0), times);
}

void write_population_map(const std::string& csv_path, const std::string& json_path, const PopulationMap& map,
                          const ChevronConfig& cfg) {
  CsvWriter w(csv_path, {"time_ns", "detuning_mhz", "p1"});
  for (std::size_t i = 0; i < map.axis_detuning.size(); ++i) {
    for (std::size_t j = 0; j < map.axis_time.size(); ++j) {
      w.row({map.axis_time[j] * 1e9, angular_to_hz(map.axis_detuning[i]) / 1e6,
             map.p1(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))});
    }
  }
  nlohmann::ordered_json js;
  js["g_mhz"] = angular_to_hz(cfg.g) / 1e6;
  js["fsr_mhz"] = angular_to_hz(cfg.omega_fsr) / 1e6;
  js["centre_mode"] = cfg.m0;
  js["half_width"] = cfg.half_width;
  js["qubit_side"] = cfg.side == CableEnd::Far ? "far" : "near";
  js["n_detunings"] = cfg.detunings.size();
  js["detuning_range_mhz"] = {angular_to_hz(cfg.detunings.front()) / 1e6, angular_to_hz(cfg.detunings.back()) / 1e6};
  js["n_times"] = cfg.times.size();
  js["time_range_ns"] = {cfg.times.front() * 1e9, cfg.times.back() * 1e9};
  std::ofstream(json_path) << js.dump(2) << '\n';
}

CoherenceResult mode_coherence_experiment(const CoherenceConfig& cfg, const device::CableParams& cable) {
  if (cfg.wait.size() < 5) throw InvalidParameter("coherence: need at least five wait points");
  if (!(cfg.g_swap > 0.0)) throw InvalidParameter("coherence: swap coupling must be positive");
  if (cfg.neighbor_modes < 0) throw InvalidParameter("coherence: negative neighbour count");
  if (!(cable.T1_mode > 0.0)) throw InvalidParameter("coherence: mode T1 must be positive");
  const double T1 = cable.T1_mode;
  const bool infinite_t1 = std::isinf(T1);
  double gamma_phi = 0.0;
  if (cfg.pure_dephasing && std::isfinite(cable.T2_mode)) {
    gamma_phi = std::max(0.0, 1.0 / cable.T2_mode - 0.5 / T1);
  }
  // Single-excitation block: qubit, then modes -k..k around the resonant one.
  const int nm = 2 * cfg.neighbor_modes + 1;
  const int ns = 1 + nm;
  double fsr = 0.0;
  if (cfg.neighbor_modes > 0) {
    if (!(cable.length > 0.0 && cable.specific_inductance > 0.0 && cable.specific_capacitance > 0.0)) {
      throw InvalidParameter("coherence: neighbour modes need the cable line constants");
    }
    fsr = device::cable_derived_params(cable).omega_fsr;
  }
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(ns, ns);
  for (int k = 0; k < nm; ++k) {
    const int off = k - cfg.neighbor_modes;
    H(1 + k, 1 + k) = off * fsr;
    H(0, 1 + k) = H(1 + k, 0) = cfg.g_swap;
  }
  const double t_swap = kPi / (2.0 * cfg.g_swap);
  const Eigen::MatrixXcd Use = propagator(H, t_swap);
  Eigen::MatrixXcd U = Eigen::MatrixXcd::Identity(ns + 1, ns + 1);  // index 0 = vacuum
  U.block(1, 1, ns, ns) = Use;

  CoherenceResult res;
  res.wait = cfg.wait;
  res.p1.resize(cfg.wait.size());
  for (std::size_t w = 0; w < cfg.wait.size(); ++w) {
    const double tau = cfg.wait[w];
    if (!(tau >= 0.0)) throw InvalidParameter("coherence: negative wait time");
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(ns + 1, ns + 1);
    if (cfg.kind == CoherenceKind::T1) {
      rho(1, 1) = 1.0;
    } else {
      rho(0, 0) = rho(0, 1) = rho(1, 0) = rho(1, 1) = 0.5;
    }
    rho = U * rho * U.adjoint();
    // Mode amplitude damping plus dephasing against the vacuum, in a frame
    // offset by the artificial detuning.
    const double amp = infinite_t1 ? 1.0 : std::exp(-0.5 * tau / T1);
    const double deph = std::exp(-gamma_phi * tau);
    double lost = 0.0;
    for (int a = 2; a <= ns; ++a) lost += rho(a, a).real() * (1.0 - amp * amp);
    for (int a = 2; a <= ns; ++a) {
      const double da = cfg.ramsey_detuning + (a - 2 - cfg.neighbor_modes) * fsr;
      for (int b = 2; b <= ns; ++b) {
        const double db = cfg.ramsey_detuning + (b - 2 - cfg.neighbor_modes) * fsr;
        rho(a, b) *= amp * amp * std::exp(cdouble(0.0, -(da - db) * tau));
      }
      const cdouble f = amp * deph * std::exp(cdouble(0.0, -da * tau));
      rho(a, 0) *= f;
      rho(0, a) *= std::conj(f);
    }
    rho(0, 0) += lost;
    rho = U * rho * U.adjoint();
    if (cfg.kind == CoherenceKind::T1) {
      res.p1[w] = rho(1, 1).real();
    } else {
      // Closing pi/2 pulse on the qubit.
      res.p1[w] = 0.5 + rho(0, 1).real();
    }
  }

  const auto [mn, mx] = std::minmax_element(res.p1.begin(), res.p1.end());
  const double span = cfg.wait.back() - cfg.wait.front();
  // Under 0.1% change across the window is not a resolvable decay.
  if (*mx - *mn < 1e-3 * std::abs(*mx) && cfg.kind == CoherenceKind::T1) {
    res.non_decaying = true;
    res.time_constant = std::numeric_limits<double>::infinity();
    return res;
  }
  // Rates are fitted in 1/us so a flat curve can sit at zero rate.
  std::vector<double> xs(cfg.wait.size());
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = cfg.wait[i] * 1e6;
  FitResult fit;
  int rate_index = 0;
  if (cfg.kind == CoherenceKind::T1) {
    Eigen::VectorXd p0(3);
    p0 << res.p1.front() - res.p1.back(), 1.0 / (span * 1e6 / 2.0), res.p1.back();
    fit = curve_fit([](double x, const Eigen::VectorXd& p) { return p[0] * std::exp(-p[1] * x) + p[2]; },
                    xs, res.p1, p0);
    rate_index = 1;
  } else {
    Eigen::VectorXd p0(5);
    p0 << 0.5 * (*mx - *mn), 1.0 / (span * 1e6 / 2.0), cfg.ramsey_detuning * 1e-6, 0.0, 0.5;
    if (res.p1.front() < 0.5) p0[3] = kPi;
    fit = curve_fit(
        [](double x, const Eigen::VectorXd& p) { return p[4] + p[0] * std::exp(-p[1] * x) * std::cos(p[2] * x + p[3]); },
        xs, res.p1, p0);
    rate_index = 1;
  }
  const double rate = fit.params[rate_index];
  const double rate_err = fit.errors[rate_index];
  res.fit_residual_rms = fit.residual_rms;
  // An exact fit can leave the covariance undefined; then only the sign counts.
  if (!(rate > 0.0) || (std::isfinite(rate_err) && rate <= 3.0 * rate_err)) {
    res.non_decaying = true;
    res.time_constant = std::numeric_limits<double>::infinity();
    return res;
  }
  res.time_constant = 1e-6 / rate;
  res.time_constant_error = std::isfinite(rate_err) ? res.time_constant * rate_err / rate : 0.0;
  return res;
}

}  // namespace qlink::multimode
