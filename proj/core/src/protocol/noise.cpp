#include "qlink/protocol/noise.hpp"

#include <cmath>
#include <string>

#include "qlink/error.hpp"
#include "qlink/protocol/gates.hpp"
#include "qlink/pulse/schedule.hpp"

namespace qlink::protocol {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidParameter("noise config: " + what);
}

bool probability(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

Eigen::Matrix2d single_confusion(double F0, double F1) {
  require(probability(F0) && probability(F1), "readout fidelities must lie in [0, 1]");
  Eigen::Matrix2d c;
  c << F0, 1.0 - F1, 1.0 - F0, F1;
  return c;
}

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Eigen::Matrix4d joint_confusion(const std::array<double, 4>& diagonal) {
  Eigen::Matrix4d out;
  for (int j = 0; j < 4; ++j) {
    require(probability(diagonal[j]), "joint readout fidelities must lie in [0, 1]");
    for (int i = 0; i < 4; ++i) out(i, j) = i == j ? diagonal[j] : (1.0 - diagonal[j]) / 3.0;
  }
  return out;
}

bool is_column_stochastic(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() != m.cols()) return false;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    if (m.col(j).minCoeff() < -tol || std::abs(m.col(j).sum() - 1.0) > tol) return false;
  }
  return true;
}

void NoiseConfig::validate() const {
  require(probability(transfer_efficiency), "transfer efficiency must lie in [0, 1]");
  for (const auto& q : qubits) require(q.T1 > 0.0 && q.Tphi > 0.0, "T1 and Tphi must be positive");
  require(probability(p_cz12) && probability(p_cz34) && probability(p_single),
          "depolarizing probabilities must lie in [0, 1]");
  for (const auto& c : confusion) require(is_column_stochastic(c, 1e-9), "confusion matrices must be column-stochastic");
  require(is_column_stochastic(joint12, 1e-9) && is_column_stochastic(joint34, 1e-9),
          "joint confusion matrices must be column-stochastic");
  require(transfer_duration >= 0.0 && gate_duration >= 0.0 && feedforward_latency >= 0.0,
          "durations must be non-negative");
  require(probability(cable_thermal_population), "thermal populations must lie in [0, 1]");
  for (double n : qubit_thermal_population) require(probability(n), "thermal populations must lie in [0, 1]");
}

NoiseConfig NoiseConfig::ideal() { return NoiseConfig{}; }

NoiseConfig NoiseConfig::from_device(const device::DeviceParams& dev, double eta) {
  NoiseConfig n;
  n.transfer_efficiency = eta;
  for (int k = 0; k < 4; ++k) {
    n.qubits[k] = {dev.qubits[k].T1, dev.qubits[k].Tphi};
    n.confusion[k] = single_confusion(dev.readout[k].F0, dev.readout[k].F1);
  }
  n.p_cz12 = depolarizing_from_fidelity(dev.cz_fidelity_12, 4);
  n.p_cz34 = depolarizing_from_fidelity(dev.cz_fidelity_34, 4);
  n.p_single = depolarizing_from_fidelity(0.999, 2);
  n.joint12 = joint_confusion(dev.joint_12.F);
  n.joint34 = joint_confusion(dev.joint_34.F);
  const auto cable = device::cable_derived_params(dev.cable);
  n.transfer_duration = pulse::shaped_window(dev.coupler_a.kappa_max, cable.tau_st);
  n.cable_thermal_population = dev.cable.thermal_population;
  n.validate();
  return n;
}

}  // namespace qlink::protocol
