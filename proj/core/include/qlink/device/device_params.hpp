#pragma once

#include <array>
#include <string>

#include "qlink/device/device_model.hpp"

namespace qlink::device {

struct ReadoutFidelity {
  double F0 = 1.0;
  double F1 = 1.0;
  double readout_time = 0.0;  // s
};

/// Assignment fidelities of a simultaneous two-qubit readout, order 00,01,10,11.
struct JointReadout {
  std::array<double, 4> F{1.0, 1.0, 1.0, 1.0};
};

/// Whole two-node device. Q1,Q2 and coupler G_A sit in Alice; Q3,Q4 and G_B
/// in Bob. G_A couples Q2 to the cable, G_B couples Q3.
struct DeviceParams {
  std::array<QubitParams, 4> qubits{};
  std::array<ReadoutFidelity, 4> readout{};
  std::array<double, 4> readout_resonator{};  // rad/s
  CouplerParams coupler_a;
  CouplerParams coupler_b;
  bool coupler_a_fitted = false;
  bool coupler_b_fitted = false;
  double cz_fidelity_12 = 1.0;
  double cz_fidelity_34 = 1.0;
  JointReadout joint_12;
  JointReadout joint_34;
  CableParams cable;

  /// 1-based qubit lookup matching the Q1..Q4 labels.
  const QubitParams& qubit(int label) const;
  const ReadoutFidelity& readout_of(int label) const;

  void validate() const;

  /// Built-in copy of the bundled default device file.
  static DeviceParams defaults();
};

/// Junction inductance of a transmon from its frequency and anharmonicity,
/// using w = sqrt(8 E_J E_C) - E_C with E_C = -anharmonicity.
double transmon_junction_inductance(double omega_q, double anharmonicity);

/// Parse a device file. Missing junction / coupler inductances are derived:
/// L_J from the transmon relation, L_T from the kappa_max anchoring fit.
/// Errors carry "source:line:col" positions.
DeviceParams parse_device(const std::string& text, const std::string& source = "<device>");
DeviceParams load_device(const std::string& path);

/// Serialize back to the file layout (all inductances written explicitly).
std::string dump_device(const DeviceParams& device);

}  // namespace qlink::device
