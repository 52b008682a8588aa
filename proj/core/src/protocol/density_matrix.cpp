#include "qlink/protocol/density_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qlink/error.hpp"

namespace qlink::protocol {

namespace {

int bit(int index, int q, int n) { return (index >> (n - 1 - q)) & 1; }

const Matrix& pauli1(int k) {
  static const Matrix P[4] = {
      Matrix::Identity(2, 2),
      (Matrix(2, 2) << 0, 1, 1, 0).finished(),
      (Matrix(2, 2) << 0, cdouble(0, -1), cdouble(0, 1), 0).finished(),
      (Matrix(2, 2) << 1, 0, 0, -1).finished(),
  };
  return P[k];
}

void check_targets(const std::vector<int>& targets, int n) {
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] < 0 || targets[i] >= n) {
      throw DimensionMismatch("target qubit " + std::to_string(targets[i]) +
                              " outside a " + std::to_string(n) + "-qubit register");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (targets[i] == targets[j]) throw DimensionMismatch("repeated target qubit");
    }
  }
}

}  // namespace

int qubit_count(Eigen::Index dim) {
  int n = 0;
  Eigen::Index d = 1;
  while (d < dim) {
    d *= 2;
    ++n;
  }
  if (d != dim || dim < 1) {
    throw DimensionMismatch("dimension " + std::to_string(dim) + " is not a power of two");
  }
  return n;
}

DensityMatrix::DensityMatrix(Matrix rho, std::vector<std::string> labels, double tol)
    : rho_(std::move(rho)), labels_(std::move(labels)) {
  if (rho_.rows() != rho_.cols()) throw DimensionMismatch("density matrix must be square");
  n_ = qubit_count(rho_.rows());
  if (!labels_.empty() && static_cast<int>(labels_.size()) != n_) {
    throw DimensionMismatch("one label per qubit expected");
  }
  check(tol);
}

DensityMatrix DensityMatrix::unchecked(Matrix rho, std::vector<std::string> labels) {
  DensityMatrix out;
  out.n_ = qubit_count(rho.rows());
  out.rho_ = std::move(rho);
  out.labels_ = std::move(labels);
  if (!out.labels_.empty() && static_cast<int>(out.labels_.size()) != out.n_) {
    out.labels_.clear();
  }
  return out;
}

DensityMatrix DensityMatrix::pure(const Vector& psi, std::vector<std::string> labels) {
  const double norm = psi.norm();
  if (!(norm > 0.0)) throw InvalidParameter("pure state needs a non-zero vector");
  const Vector v = psi / norm;
  return DensityMatrix(v * v.adjoint(), std::move(labels));
}

DensityMatrix DensityMatrix::basis(int n_qubits, int index, std::vector<std::string> labels) {
  const int d = 1 << n_qubits;
  if (index < 0 || index >= d) throw DimensionMismatch("basis index out of range");
  Matrix rho = Matrix::Zero(d, d);
  rho(index, index) = 1.0;
  return DensityMatrix(std::move(rho), std::move(labels));
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho_ + rho_.adjoint()),
                                           Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

void DensityMatrix::check(double tol) const {
  const double herm = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > tol) {
    throw NumericalError("density matrix is not Hermitian (deviation " +
                         std::to_string(herm) + ")");
  }
  if (std::abs(trace() - 1.0) > tol) {
    throw NumericalError("density matrix trace is " + std::to_string(trace()));
  }
  if (min_eigenvalue() < -tol) {
    throw NumericalError("density matrix has eigenvalue " + std::to_string(min_eigenvalue()));
  }
}

DensityMatrix DensityMatrix::partial_trace(const std::vector<int>& keep) const {
  check_targets(keep, n_);
  std::vector<int> traced;
  for (int q = 0; q < n_; ++q) {
    if (std::find(keep.begin(), keep.end(), q) == keep.end()) traced.push_back(q);
  }
  const int k = static_cast<int>(keep.size());
  const int dk = 1 << k;
  const int dt = 1 << static_cast<int>(traced.size());

  auto compose = [&](int a, int t) {
    int idx = 0;
    for (int i = 0; i < k; ++i) {
      if ((a >> (k - 1 - i)) & 1) idx |= 1 << (n_ - 1 - keep[i]);
    }
    const int m = static_cast<int>(traced.size());
    for (int i = 0; i < m; ++i) {
      if ((t >> (m - 1 - i)) & 1) idx |= 1 << (n_ - 1 - traced[i]);
    }
    return idx;
  };

  Matrix out = Matrix::Zero(dk, dk);
  for (int a = 0; a < dk; ++a) {
    for (int b = 0; b < dk; ++b) {
      cdouble s = 0.0;
      for (int t = 0; t < dt; ++t) s += rho_(compose(a, t), compose(b, t));
      out(a, b) = s;
    }
  }
  std::vector<std::string> labels;
  if (!labels_.empty()) {
    for (int q : keep) labels.push_back(labels_[q]);
  }
  return unchecked(std::move(out), std::move(labels));
}

DensityMatrix DensityMatrix::tensor(const DensityMatrix& other) const {
  const int da = dim();
  const int db = other.dim();
  Matrix out(da * db, da * db);
  for (int i = 0; i < da; ++i) {
    for (int j = 0; j < da; ++j) out.block(i * db, j * db, db, db) = rho_(i, j) * other.rho_;
  }
  std::vector<std::string> labels;
  if (!labels_.empty() && !other.labels_.empty()) {
    labels = labels_;
    labels.insert(labels.end(), other.labels_.begin(), other.labels_.end());
  }
  return unchecked(std::move(out), std::move(labels));
}

Matrix permutation_operator(const std::vector<int>& order) {
  const int n = static_cast<int>(order.size());
  check_targets(order, n);
  const int d = 1 << n;
  Matrix P = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    int j = 0;
    for (int q = 0; q < n; ++q) j = (j << 1) | bit(i, order[q], n);
    P(j, i) = 1.0;
  }
  return P;
}

DensityMatrix DensityMatrix::permuted(const std::vector<int>& order) const {
  if (static_cast<int>(order.size()) != n_) throw DimensionMismatch("permutation size");
  const Matrix P = permutation_operator(order);
  std::vector<std::string> labels;
  if (!labels_.empty()) {
    for (int q : order) labels.push_back(labels_[q]);
  }
  return unchecked(P * rho_ * P.adjoint(), std::move(labels));
}

Matrix embed(const Matrix& op, const std::vector<int>& targets, int n) {
  check_targets(targets, n);
  const int k = static_cast<int>(targets.size());
  if (op.rows() != (1 << k) || op.cols() != (1 << k)) {
    throw DimensionMismatch("operator size does not match the number of targets");
  }
  const int d = 1 << n;
  int mask = 0;
  for (int q : targets) mask |= 1 << (n - 1 - q);

  Matrix M = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    int sub = 0;
    for (int q : targets) sub = (sub << 1) | bit(i, q, n);
    const int rest = i & ~mask;
    for (int s = 0; s < (1 << k); ++s) {
      const cdouble amp = op(s, sub);
      if (amp == cdouble(0.0)) continue;
      int j = rest;
      for (int t = 0; t < k; ++t) {
        if ((s >> (k - 1 - t)) & 1) j |= 1 << (n - 1 - targets[t]);
      }
      M(j, i) += amp;
    }
  }
  return M;
}

double QuantumChannel::completeness_error() const {
  const int d = 1 << n_qubits;
  Matrix s = Matrix::Zero(d, d);
  for (const auto& K : kraus) s += K.adjoint() * K;
  return (s - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
}

void QuantumChannel::check(double tol) const {
  if (kraus.empty()) throw InvalidParameter("channel has no Kraus operators");
  const int d = 1 << n_qubits;
  for (const auto& K : kraus) {
    if (K.rows() != d || K.cols() != d) throw DimensionMismatch("Kraus operator size");
  }
  const double err = completeness_error();
  if (err > tol) {
    throw NumericalError("Kraus operators are not trace preserving (error " +
                         std::to_string(err) + ")");
  }
}

DensityMatrix QuantumChannel::apply(const DensityMatrix& rho,
                                    const std::vector<int>& targets) const {
  if (static_cast<int>(targets.size()) != n_qubits) {
    throw DimensionMismatch("channel acts on " + std::to_string(n_qubits) + " qubits");
  }
  const int n = rho.n_qubits();
  const int d = rho.dim();
  Matrix out = Matrix::Zero(d, d);
  for (const auto& K : kraus) {
    const Matrix E = embed(K, targets, n);
    out.noalias() += E * rho.matrix() * E.adjoint();
  }
  return DensityMatrix::unchecked(std::move(out), rho.labels());
}

QuantumChannel QuantumChannel::after(const QuantumChannel& first) const {
  if (first.n_qubits != n_qubits) throw DimensionMismatch("channel composition size");
  QuantumChannel out;
  out.n_qubits = n_qubits;
  for (const auto& a : kraus) {
    for (const auto& b : first.kraus) out.kraus.push_back(a * b);
  }
  return out;
}

QuantumChannel QuantumChannel::unitary(const Matrix& U) {
  QuantumChannel out;
  out.n_qubits = qubit_count(U.rows());
  out.kraus.push_back(U);
  return out;
}

QuantumChannel amplitude_damping(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw InvalidParameter("amplitude damping strength must lie in [0, 1]");
  }
  QuantumChannel ch;
  ch.kraus.push_back((Matrix(2, 2) << 1, 0, 0, std::sqrt(1.0 - gamma)).finished());
  ch.kraus.push_back((Matrix(2, 2) << 0, std::sqrt(gamma), 0, 0).finished());
  return ch;
}

QuantumChannel phase_flip(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidParameter("phase flip probability must lie in [0, 1]");
  QuantumChannel ch;
  ch.kraus.push_back(std::sqrt(1.0 - p) * pauli1(0));
  ch.kraus.push_back(std::sqrt(p) * pauli1(3));
  return ch;
}

QuantumChannel idle_channel(double t, double T1, double Tphi) {
  if (!(t >= 0.0)) throw InvalidParameter("idle time must be non-negative");
  if (!(T1 > 0.0) || !(Tphi > 0.0)) throw InvalidParameter("T1 and Tphi must be positive");
  const double gamma = std::isinf(T1) ? 0.0 : -std::expm1(-t / T1);
  const double p = std::isinf(Tphi) ? 0.0 : -0.5 * std::expm1(-t / Tphi);
  return amplitude_damping(gamma).after(phase_flip(p));
}

QuantumChannel depolarizing(double p, int k) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidParameter("depolarizing probability must lie in [0, 1]");
  if (k < 1 || k > 3) throw InvalidParameter("depolarizing channel supports 1 to 3 qubits");
  const int terms = 1 << (2 * k);
  QuantumChannel ch;
  ch.n_qubits = k;
  for (int t = 0; t < terms; ++t) {
    Matrix P = Matrix::Identity(1, 1);
    for (int q = 0; q < k; ++q) {
      const int a = (t >> (2 * (k - 1 - q))) & 3;
      Matrix next(P.rows() * 2, P.cols() * 2);
      for (int i = 0; i < P.rows(); ++i) {
        for (int j = 0; j < P.cols(); ++j) next.block(2 * i, 2 * j, 2, 2) = P(i, j) * pauli1(a);
      }
      P = std::move(next);
    }
    const double w = (t == 0 ? 1.0 - p : 0.0) + p / terms;
    if (w > 0.0) ch.kraus.push_back(std::sqrt(w) * P);
  }
  return ch;
}

QuantumChannel channel_from_transfer(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw InvalidParameter("transfer efficiency must lie in [0, 1]");
  Matrix swap = Matrix::Zero(4, 4);
  swap(0, 0) = swap(3, 3) = 1.0;
  swap(1, 2) = swap(2, 1) = 1.0;
  QuantumChannel ch;
  ch.n_qubits = 2;
  for (const auto& A : amplitude_damping(1.0 - eta).kraus) {
    ch.kraus.push_back(embed(A, {1}, 2) * swap);
  }
  return ch;
}

}  // namespace qlink::protocol
