#pragma once

#include <string>
#include <vector>

#include "qlink/device/device_params.hpp"

namespace qlink::protocol {

struct CoolingConfig {
  int n_cycles = 100;
  double qubit_thermal = 0.005;
  double cable_thermal = 0.04;
  double swap_fraction = 0.05;     // of the cable excess moved into the qubit per cycle
  double reset_residual = 0.005;   // qubit population after each reset
  double rethermalization = 0.02;  // relaxation of the cable toward its bath per cycle
  double environment_population = 0.04;

  void validate() const;
};

struct CoolingTrace {
  std::vector<int> cycle;
  std::vector<double> cable;
  std::vector<double> qubit;
};

/// Entry 0 holds the initial populations, entry k the populations after k
/// swap-reset-rethermalize cycles.
CoolingTrace active_cooling_sim(const CoolingConfig& cfg);

/// Fixed point of the cycle map for the cable population.
double cooling_floor(const CoolingConfig& cfg);

struct BudgetItem {
  std::string name;
  double value = 0.0;  // inefficiency fraction
};

struct BudgetConfig {
  device::CableParams cable;
  double measured_efficiency = 0.904;
  double thermal_inefficiency = 0.013;
  double sender_T1 = 0.0;    // s, <= 0 or inf disables
  double receiver_T1 = 0.0;  // s
  double kappa_c = 0.0;      // 1/s, shaped-pulse peak rate
  double dt_max = 0.05e-9;

  static BudgetConfig from_device(const device::DeviceParams& dev);
};

struct InefficiencyBudget {
  std::vector<BudgetItem> items;  // cable, thermal, decoherence, joints, residual
  double measured_inefficiency = 0.0;
  double modeled = 0.0;           // sum of the non-residual items

  double item(const std::string& name) const;
};

/// Decoherence is the drop in transfer efficiency at the end of the receiver
/// window when the qubits' T1 is switched on in the input-output model.
InefficiencyBudget inefficiency_budget(const BudgetConfig& cfg);

}  // namespace qlink::protocol
