#pragma once

#include <array>
#include <limits>

#include <Eigen/Dense>

#include "qlink/device/device_params.hpp"

namespace qlink::protocol {

struct QubitNoise {
  double T1 = std::numeric_limits<double>::infinity();    // s
  double Tphi = std::numeric_limits<double>::infinity();  // s
};

/// Noise and timing of the four-qubit link. Qubit index k holds Q(k+1).
struct NoiseConfig {
  double transfer_efficiency = 1.0;
  std::array<QubitNoise, 4> qubits{};
  double p_cz12 = 0.0;
  double p_cz34 = 0.0;
  double p_single = 0.0;
  std::array<Eigen::Matrix2d, 4> confusion{Eigen::Matrix2d::Identity(), Eigen::Matrix2d::Identity(),
                                           Eigen::Matrix2d::Identity(), Eigen::Matrix2d::Identity()};
  Eigen::Matrix4d joint12 = Eigen::Matrix4d::Identity();
  Eigen::Matrix4d joint34 = Eigen::Matrix4d::Identity();

  double transfer_duration = 0.0;      // s, sender holds its half while the photon flies
  double gate_duration = 0.15e-6;      // s, idle accumulated by the local operations
  double feedforward_latency = 1.3e-6; // s
  double cable_thermal_population = 0.0;
  std::array<double, 4> qubit_thermal_population{};  // applied to prepared inputs

  void validate() const;

  static NoiseConfig ideal();
  static NoiseConfig from_device(const device::DeviceParams& device,
                                 double transfer_efficiency = 0.904);
  static NoiseConfig paper_defaults() { return from_device(device::DeviceParams::defaults()); }
};

/// [[F0, 1-F1], [1-F0, F1]], columns indexed by the true state.
Eigen::Matrix2d single_confusion(double F0, double F1);

/// Joint two-qubit confusion with the measured diagonal; the rest of each
/// column is split evenly over the three wrong outcomes.
Eigen::Matrix4d joint_confusion(const std::array<double, 4>& diagonal);

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

bool is_column_stochastic(const Eigen::MatrixXd& m, double tol = 1e-12);

}  // namespace qlink::protocol
