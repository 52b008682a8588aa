#include "qlink/tomography/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "qlink/error.hpp"
#include "qlink/protocol/gates.hpp"
#include "qlink/units.hpp"
#include "qlink/util/parallel.hpp"

namespace qlink::tomography {

using protocol::cdouble;

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Eigen::VectorXd born(const Matrix& rho, const Matrix& U) {
  const Matrix r = U * rho * U.adjoint();
  Eigen::VectorXd p(r.rows());
  for (Eigen::Index k = 0; k < r.rows(); ++k) p(k) = std::max(0.0, r(k, k).real());
  return p / p.sum();
}

void check_confusion(const Eigen::MatrixXd& C, Eigen::Index d) {
  if (C.rows() != d || C.cols() != d) throw DimensionMismatch("confusion matrix size");
  for (Eigen::Index j = 0; j < d; ++j) {
    if (std::abs(C.col(j).sum() - 1.0) > 1e-9 || C.col(j).minCoeff() < 0.0) {
      throw InvalidParameter("confusion matrix must be column-stochastic");
    }
  }
}

// Duchi et al. projection of v onto {x >= 0, sum x = 1}.
Eigen::VectorXd simplex_projection(const Eigen::VectorXd& v) {
  std::vector<double> u(v.data(), v.data() + v.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    cum += u[k];
    const double t = (cum - 1.0) / static_cast<double>(k + 1);
    if (u[k] - t > 0.0) theta = t;
  }
  return (v.array() - theta).max(0.0).matrix();
}

Matrix hermitian_sqrt(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()));
  const Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

std::string to_string(PreRotation r) {
  switch (r) {
    case PreRotation::I: return "I";
    case PreRotation::X2: return "X/2";
    case PreRotation::Y2: return "Y/2";
  }
  return "?";
}

Matrix pre_rotation_unitary(PreRotation r) {
  switch (r) {
    case PreRotation::I: return Matrix::Identity(2, 2);
    case PreRotation::X2: return protocol::rotation(1, kPi / 2);
    case PreRotation::Y2: return protocol::rotation(2, kPi / 2);
  }
  throw InvalidParameter("unknown pre-rotation");
}

std::vector<Setting> complete_settings(int n) {
  if (n < 1 || n > 4) throw InvalidParameter("tomography supports 1 to 4 qubits");
  std::vector<Setting> out;
  int total = 1;
  for (int q = 0; q < n; ++q) total *= 3;
  for (int i = 0; i < total; ++i) {
    Setting s(n);
    int x = i;
    for (int q = n - 1; q >= 0; --q) {
      s[q] = static_cast<PreRotation>(x % 3);
      x /= 3;
    }
    out.push_back(s);
  }
  return out;
}

TomographySettings TomographySettings::complete(int n) {
  TomographySettings s;
  s.settings = complete_settings(n);
  return s;
}

Matrix setting_unitary(const Setting& s) {
  Matrix U = Matrix::Identity(1, 1);
  for (PreRotation r : s) U = kron(U, pre_rotation_unitary(r));
  return U;
}

TomographyData exact_data(const DensityMatrix& rho, const std::vector<Setting>& settings,
                          const Eigen::MatrixXd* confusion) {
  TomographyData data;
  data.n_qubits = rho.n_qubits();
  data.settings = settings;
  if (confusion) check_confusion(*confusion, rho.dim());
  for (const auto& s : settings) {
    if (static_cast<int>(s.size()) != rho.n_qubits()) throw DimensionMismatch("setting size");
    Eigen::VectorXd p = born(rho.matrix(), setting_unitary(s));
    if (confusion) p = *confusion * p;
    data.probabilities.push_back(p);
  }
  return data;
}

TomographyData sampled_data(const DensityMatrix& rho, const std::vector<Setting>& settings,
                            int shots, Rng& rng, const Eigen::MatrixXd* confusion) {
  if (shots <= 0) throw InvalidParameter("shots must be positive");
  TomographyData data = exact_data(rho, settings, confusion);
  for (auto& p : data.probabilities) {
    std::discrete_distribution<int> dist(p.data(), p.data() + p.size());
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(p.size());
    for (int s = 0; s < shots; ++s) counts(dist(rng)) += 1.0;
    p = counts / shots;
  }
  return data;
}

std::vector<std::string> pauli_labels(int n) {
  static const char* names = "IXYZ";
  std::vector<std::string> out;
  const int total = 1 << (2 * n);
  for (int i = 0; i < total; ++i) {
    std::string s;
    for (int q = 0; q < n; ++q) s += names[(i >> (2 * (n - 1 - q))) & 3];
    out.push_back(s);
  }
  return out;
}

std::vector<Matrix> pauli_basis(int n) {
  std::vector<Matrix> out;
  const int total = 1 << (2 * n);
  for (int i = 0; i < total; ++i) {
    Matrix P = Matrix::Identity(1, 1);
    for (int q = 0; q < n; ++q) P = kron(P, protocol::pauli((i >> (2 * (n - 1 - q))) & 3));
    out.push_back(P);
  }
  return out;
}

Matrix qst_linear(const TomographyData& data) {
  const int n = data.n_qubits;
  const int d = 1 << n;
  if (data.settings.size() != data.probabilities.size()) {
    throw DimensionMismatch("one probability vector per setting expected");
  }
  const auto basis = pauli_basis(n);
  const int np = static_cast<int>(basis.size());
  const int rows = static_cast<int>(data.settings.size()) * d;
  Eigen::MatrixXd A(rows, np);
  Eigen::VectorXd b(rows);
  int row = 0;
  for (std::size_t s = 0; s < data.settings.size(); ++s) {
    if (data.probabilities[s].size() != d) throw DimensionMismatch("probability vector size");
    const Matrix U = setting_unitary(data.settings[s]);
    for (int k = 0; k < d; ++k) {
      // E = U^dag |k><k| U, so tr(E P) = (U P U^dag)_kk.
      for (int m = 0; m < np; ++m) A(row, m) = (U * basis[m] * U.adjoint())(k, k).real() / d;
      b(row) = data.probabilities[s](k);
      ++row;
    }
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  qr.setThreshold(1e-10);
  if (qr.rank() < np) {
    throw RankDeficiency("tomography settings determine only " + std::to_string(qr.rank()) +
                         " of " + std::to_string(np) + " Pauli expectation values");
  }
  const Eigen::VectorXd r = qr.solve(b);
  Matrix rho = Matrix::Zero(d, d);
  for (int m = 0; m < np; ++m) rho += (r(m) / d) * basis[m];
  const double tr = rho.trace().real();
  if (!(tr > 0.0)) throw NumericalError("reconstructed state has non-positive trace");
  return rho / tr;
}

DensityMatrix qst(const TomographyData& data, Estimator est) {
  Matrix rho = project_physical(qst_linear(data), MatrixKind::State);
  if (est == Estimator::MaximumLikelihood) {
    const int d = 1 << data.n_qubits;
    std::vector<Matrix> E;
    std::vector<double> f;
    for (std::size_t s = 0; s < data.settings.size(); ++s) {
      const Matrix U = setting_unitary(data.settings[s]);
      for (int k = 0; k < d; ++k) {
        E.push_back(U.adjoint().col(k) * U.row(k));
        f.push_back(data.probabilities[s](k));
      }
    }
    // Start from a full-rank mixture so zero-probability projectors stay finite.
    rho = 0.9 * rho + 0.1 * Matrix::Identity(d, d) / d;
    for (int it = 0; it < 5000; ++it) {
      Matrix R = Matrix::Zero(d, d);
      for (std::size_t k = 0; k < E.size(); ++k) {
        const double p = (E[k] * rho).trace().real();
        if (p > 1e-14) R += (f[k] / p) * E[k];
      }
      Matrix next = R * rho * R;
      next /= next.trace().real();
      next = 0.5 * (next + next.adjoint());
      const double change = (next - rho).cwiseAbs().maxCoeff();
      rho = std::move(next);
      if (change < 1e-12) break;
    }
  }
  return DensityMatrix(rho, {}, 1e-9);
}

Matrix ProcessMatrix::apply(const Matrix& rho) const {
  const auto basis = pauli_basis(n_qubits);
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  for (std::size_t m = 0; m < basis.size(); ++m) {
    for (std::size_t k = 0; k < basis.size(); ++k) {
      if (chi(m, k) == cdouble(0.0)) continue;
      out += chi(m, k) * basis[m] * rho * basis[k];
    }
  }
  return out;
}

std::vector<Vector> standard_inputs() {
  const double s = 1.0 / std::sqrt(2.0);
  std::vector<Vector> v(4, Vector(2));
  v[0] << 1.0, 0.0;
  v[1] << s, cdouble(0.0, -s);
  v[2] << s, s;
  v[3] << 0.0, 1.0;
  return v;
}

std::vector<DensityMatrix> standard_input_states(int n) {
  std::vector<DensityMatrix> out;
  const auto single = standard_inputs();
  const int total = 1 << (2 * n);
  for (int i = 0; i < total; ++i) {
    Vector psi = Vector::Ones(1);
    for (int q = 0; q < n; ++q) {
      const Vector& a = single[(i >> (2 * (n - 1 - q))) & 3];
      Vector next(psi.size() * 2);
      for (Eigen::Index j = 0; j < psi.size(); ++j) next.segment(2 * j, 2) = psi(j) * a;
      psi = next;
    }
    out.push_back(DensityMatrix::pure(psi));
  }
  return out;
}

ProcessMatrix qpt(const std::vector<DensityMatrix>& inputs, const std::vector<Matrix>& outputs,
                  bool project) {
  if (inputs.empty() || inputs.size() != outputs.size()) {
    throw DimensionMismatch("qpt needs one output per input");
  }
  const int n = inputs.front().n_qubits();
  const int d = 1 << n;
  const auto basis = pauli_basis(n);
  const int np = static_cast<int>(basis.size());
  const int rows = static_cast<int>(inputs.size()) * d * d;

  Matrix A(rows, np * np);
  Vector b(rows);
  for (std::size_t j = 0; j < inputs.size(); ++j) {
    if (inputs[j].dim() != d || outputs[j].rows() != d || outputs[j].cols() != d) {
      throw DimensionMismatch("qpt inputs and outputs must share one dimension");
    }
    for (int m = 0; m < np; ++m) {
      const Matrix left = basis[m] * inputs[j].matrix();
      for (int k = 0; k < np; ++k) {
        const Matrix term = left * basis[k];
        for (int a = 0; a < d; ++a) {
          for (int c = 0; c < d; ++c) A(static_cast<int>(j) * d * d + a * d + c, m * np + k) = term(a, c);
        }
      }
    }
    for (int a = 0; a < d; ++a) {
      for (int c = 0; c < d; ++c) b(static_cast<int>(j) * d * d + a * d + c) = outputs[j](a, c);
    }
  }
  Eigen::ColPivHouseholderQR<Matrix> qr(A);
  qr.setThreshold(1e-10);
  if (qr.rank() < np * np) {
    throw RankDeficiency("process inputs determine only " + std::to_string(qr.rank()) + " of " +
                         std::to_string(np * np) + " chi entries");
  }
  const Vector x = qr.solve(b);
  ProcessMatrix out;
  out.n_qubits = n;
  out.chi = Matrix(np, np);
  for (int m = 0; m < np; ++m) {
    for (int k = 0; k < np; ++k) out.chi(m, k) = x(m * np + k);
  }
  out.chi = 0.5 * (out.chi + out.chi.adjoint());
  if (project) out.chi = project_physical(out.chi, MatrixKind::Process);
  return out;
}

ProcessMatrix chi_from_kraus(const std::vector<Matrix>& kraus) {
  if (kraus.empty()) throw InvalidParameter("empty Kraus set");
  const int n = protocol::qubit_count(kraus.front().rows());
  const int d = 1 << n;
  const auto basis = pauli_basis(n);
  ProcessMatrix out;
  out.n_qubits = n;
  out.chi = Matrix::Zero(basis.size(), basis.size());
  for (const auto& K : kraus) {
    if (K.rows() != d || K.cols() != d) throw DimensionMismatch("Kraus operator size");
    Vector c(basis.size());
    for (std::size_t m = 0; m < basis.size(); ++m) c(m) = (basis[m] * K).trace() / double(d);
    out.chi += c * c.adjoint();
  }
  return out;
}

ProcessMatrix chi_from_unitary(const Matrix& U) { return chi_from_kraus({U}); }

double state_fidelity(const DensityMatrix& rho, const Vector& psi) {
  if (psi.size() != rho.dim()) throw DimensionMismatch("state fidelity dimensions differ");
  const Vector v = psi.normalized();
  return (v.adjoint() * rho.matrix() * v)(0, 0).real();
}

double state_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw DimensionMismatch("state fidelity dimensions differ");
  const Matrix s = hermitian_sqrt(rho.matrix());
  const Matrix inner = s * sigma.matrix() * s;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (inner + inner.adjoint()), Eigen::EigenvaluesOnly);
  // Rounding-level eigenvalues would each add ~1e-8 through the square root.
  const double floor = 1e-14 * std::max(1.0, es.eigenvalues().maxCoeff());
  double t = 0.0;
  for (double l : es.eigenvalues()) t += l > floor ? std::sqrt(l) : 0.0;
  return t * t;
}

double process_fidelity(const ProcessMatrix& chi, const ProcessMatrix& ideal) {
  if (chi.chi.rows() != ideal.chi.rows()) throw DimensionMismatch("process dimensions differ");
  return (chi.chi * ideal.chi).trace().real();
}

Eigen::VectorXd readout_correct(const Eigen::VectorXd& measured, const Eigen::MatrixXd& C) {
  check_confusion(C, measured.size());
  Eigen::FullPivLU<Eigen::MatrixXd> lu(C);
  if (!lu.isInvertible() || std::abs(lu.determinant()) < 1e-12) {
    throw NumericalError("confusion matrix is singular");
  }
  Eigen::VectorXd p = lu.solve(measured);
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    if (p(k) < -0.01) {
      throw NumericalError("readout correction produced probability " + std::to_string(p(k)));
    }
    if (p(k) < 0.0) p(k) = 0.0;
  }
  return p / p.sum();
}

TomographyData readout_correct(const TomographyData& data, const Eigen::MatrixXd& confusion) {
  TomographyData out = data;
  for (auto& p : out.probabilities) p = readout_correct(p, confusion);
  return out;
}

Matrix project_physical(const Matrix& m, MatrixKind) {
  if (m.rows() != m.cols()) throw DimensionMismatch("projection needs a square matrix");
  // Both kinds are normalized to unit trace in this convention.
  const Matrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const Eigen::VectorXd ev = simplex_projection(es.eigenvalues());
  Matrix out = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
  out = 0.5 * (out + out.adjoint());
  return out;
}

RepeatStats repeat_statistics(const std::function<double(Rng&)>& experiment, int repeats,
                              std::uint64_t seed, int workers) {
  if (repeats <= 0) throw InvalidParameter("repeats must be positive");
  RepeatStats st;
  st.seed = seed;
  st.values.assign(repeats, 0.0);
  parallel_for(static_cast<std::size_t>(repeats), workers, [&](std::size_t r) {
    Rng rng(derive_seed(seed, r));
    st.values[r] = experiment(rng);
  });
  st.mean = std::accumulate(st.values.begin(), st.values.end(), 0.0) / repeats;
  double ss = 0.0;
  for (double v : st.values) ss += (v - st.mean) * (v - st.mean);
  st.stddev = repeats > 1 ? std::sqrt(ss / (repeats - 1)) : 0.0;
  return st;
}

}  // namespace qlink::tomography
