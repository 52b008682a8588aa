#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qlink/protocol/density_matrix.hpp"
#include "qlink/util/rng.hpp"

namespace qlink::tomography {

using protocol::DensityMatrix;
using protocol::Matrix;
using protocol::Vector;

/// Pre-measurement pulse. X2 followed by a Z measurement reads -Y; Y2 reads X.
enum class PreRotation { I, X2, Y2 };

std::string to_string(PreRotation r);
Matrix pre_rotation_unitary(PreRotation r);

/// One rotation per qubit, qubit 0 first.
using Setting = std::vector<PreRotation>;

/// {I, X/2, Y/2}^n, lexicographic with qubit 0 slowest.
std::vector<Setting> complete_settings(int n_qubits);
Matrix setting_unitary(const Setting& s);

struct TomographySettings {
  std::vector<Setting> settings;
  int shots = 4096;
  int repeats = 40;

  static TomographySettings complete(int n_qubits);
};

/// Measured (or exact) outcome probabilities, one vector of 2^n entries per
/// setting, outcome index in computational order.
struct TomographyData {
  int n_qubits = 1;
  std::vector<Setting> settings;
  std::vector<Eigen::VectorXd> probabilities;
};

/// Born probabilities after each setting's pre-rotation, optionally pushed
/// through a column-stochastic confusion matrix.
TomographyData exact_data(const DensityMatrix& rho, const std::vector<Setting>& settings,
                          const Eigen::MatrixXd* confusion = nullptr);

/// Multinomial sampling of `shots` per setting.
TomographyData sampled_data(const DensityMatrix& rho, const std::vector<Setting>& settings,
                            int shots, Rng& rng, const Eigen::MatrixXd* confusion = nullptr);

/// Pauli-basis labels and matrices, {I,X,Y,Z}^n lexicographic.
std::vector<std::string> pauli_labels(int n_qubits);
std::vector<Matrix> pauli_basis(int n_qubits);

enum class Estimator { Linear, MaximumLikelihood };

/// Least-squares inversion to a Hermitian, unit-trace matrix; not projected.
Matrix qst_linear(const TomographyData& data);
/// Linear inversion followed by physical projection, or an R rho R
/// likelihood iteration seeded by it.
DensityMatrix qst(const TomographyData& data, Estimator est = Estimator::Linear);

struct ProcessMatrix {
  Matrix chi;  // d^2 x d^2 in the Pauli basis
  int n_qubits = 1;

  std::vector<std::string> labels() const { return pauli_labels(n_qubits); }
  /// Apply the process, rho -> sum chi_mn P_m rho P_n.
  Matrix apply(const Matrix& rho) const;
};

/// The four single-qubit inputs |0>, |0>-i|1>, |0>+|1>, |1> (normalized).
std::vector<Vector> standard_inputs();
/// Product inputs over n qubits, qubit 0 slowest.
std::vector<DensityMatrix> standard_input_states(int n_qubits);

/// Linear inversion of sum_mn chi_mn P_m rho_j P_n = out_j, projected to a
/// physical trace-one chi unless `project` is false.
ProcessMatrix qpt(const std::vector<DensityMatrix>& inputs,
                  const std::vector<Matrix>& outputs, bool project = true);

/// Brute-force chi of a Kraus set: chi_mn = sum_K c_m(K) conj(c_n(K)).
ProcessMatrix chi_from_kraus(const std::vector<Matrix>& kraus);
ProcessMatrix chi_from_unitary(const Matrix& U);

/// <psi|rho|psi> for a pure target.
double state_fidelity(const DensityMatrix& rho, const Vector& psi);
/// Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double state_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);
/// Re tr(chi chi_ideal).
double process_fidelity(const ProcessMatrix& chi, const ProcessMatrix& ideal);

/// Solves C p = measured; clips entries in (-0.01, 0) to 0 and renormalizes.
Eigen::VectorXd readout_correct(const Eigen::VectorXd& measured, const Eigen::MatrixXd& confusion);
TomographyData readout_correct(const TomographyData& data, const Eigen::MatrixXd& confusion);

enum class MatrixKind { State, Process };
/// Nearest PSD matrix of unit trace in Frobenius norm: eigenvalues projected
/// onto the probability simplex.
Matrix project_physical(const Matrix& m, MatrixKind kind = MatrixKind::State);

struct RepeatStats {
  double mean = 0.0;
  double stddev = 0.0;
  std::vector<double> values;
  std::uint64_t seed = 0;
};

/// Runs `experiment` once per repeat with an Rng seeded from (seed, repeat);
/// the sample standard deviation uses n - 1.
RepeatStats repeat_statistics(const std::function<double(Rng&)>& experiment, int repeats,
                              std::uint64_t seed, int workers = 1);

}  // namespace qlink::tomography
