#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

// Dense n-qubit states and channels. Qubit 0 is the most significant bit of
// the computational-basis index.

namespace qlink::protocol {

using cdouble = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

class DensityMatrix {
 public:
  DensityMatrix() = default;
  /// Validates Hermiticity, unit trace and positivity within `tol`.
  explicit DensityMatrix(Matrix rho, std::vector<std::string> labels = {}, double tol = 1e-9);

  static DensityMatrix pure(const Vector& psi, std::vector<std::string> labels = {});
  /// |index><index| on n qubits.
  static DensityMatrix basis(int n_qubits, int index, std::vector<std::string> labels = {});
  /// Trusted construction without the positivity check (internal use after
  /// trace-preserving maps).
  static DensityMatrix unchecked(Matrix rho, std::vector<std::string> labels);

  const Matrix& matrix() const { return rho_; }
  int dim() const { return static_cast<int>(rho_.rows()); }
  int n_qubits() const { return n_; }
  const std::vector<std::string>& labels() const { return labels_; }

  cdouble operator()(int r, int c) const { return rho_(r, c); }
  double population(int index) const { return rho_(index, index).real(); }
  double trace() const { return rho_.trace().real(); }
  double min_eigenvalue() const;

  /// Reduced state on `keep` (in that order).
  DensityMatrix partial_trace(const std::vector<int>& keep) const;
  DensityMatrix tensor(const DensityMatrix& other) const;
  /// Reorder qubits: new qubit k is old qubit order[k].
  DensityMatrix permuted(const std::vector<int>& order) const;

  void check(double tol = 1e-9) const;

 private:
  Matrix rho_;
  int n_ = 0;
  std::vector<std::string> labels_;
};

int qubit_count(Eigen::Index dim);

/// Lift a 2^k x 2^k operator acting on `targets` (in order) to n qubits.
Matrix embed(const Matrix& op, const std::vector<int>& targets, int n_qubits);

/// Permutation matrix P with P |b_0..b_{n-1}> = |b_order[0]..b_order[n-1]>.
Matrix permutation_operator(const std::vector<int>& order);

struct QuantumChannel {
  std::vector<Matrix> kraus;
  int n_qubits = 1;

  /// max |sum K^dag K - I|.
  double completeness_error() const;
  void check(double tol = 1e-12) const;
  DensityMatrix apply(const DensityMatrix& rho, const std::vector<int>& targets) const;
  /// Channel composition: this after `first`.
  QuantumChannel after(const QuantumChannel& first) const;
  static QuantumChannel unitary(const Matrix& U);
};

QuantumChannel amplitude_damping(double gamma);
/// Pauli-Z with probability p.
QuantumChannel phase_flip(double p);
/// T1 decay and pure dephasing over an idle of length t (coherence factor
/// exp(-t/(2 T1) - t/Tphi)). Infinite times disable the respective part.
QuantumChannel idle_channel(double t, double T1, double Tphi);
/// (1-p) rho + p/d^2 sum_P P rho P on k qubits.
QuantumChannel depolarizing(double p, int k);

/// Sender/receiver pair: ideal swap followed by amplitude damping of
/// strength 1 - eta on the receiver.
QuantumChannel channel_from_transfer(double eta_transfer);

}  // namespace qlink::protocol
