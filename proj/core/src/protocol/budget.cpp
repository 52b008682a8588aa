#include "qlink/protocol/budget.hpp"

#include <cmath>

#include "qlink/error.hpp"
#include "qlink/iosim/pitch_catch.hpp"
#include "qlink/pulse/schedule.hpp"

namespace qlink::protocol {

namespace {

bool fraction(double x) { return x >= 0.0 && x <= 1.0; }

}  // namespace

void CoolingConfig::validate() const {
  if (n_cycles < 0) throw InvalidParameter("cooling: cycle count must be non-negative");
  if (!fraction(qubit_thermal) || !fraction(cable_thermal) || !fraction(swap_fraction) ||
      !fraction(reset_residual) || !fraction(rethermalization) || !fraction(environment_population)) {
    throw InvalidParameter("cooling: populations and fractions must lie in [0, 1]");
  }
}

CoolingTrace active_cooling_sim(const CoolingConfig& cfg) {
  cfg.validate();
  CoolingTrace tr;
  double nc = cfg.cable_thermal;
  double nq = cfg.qubit_thermal;
  tr.cycle.push_back(0);
  tr.cable.push_back(nc);
  tr.qubit.push_back(nq);
  for (int k = 1; k <= cfg.n_cycles; ++k) {
    const double moved = cfg.swap_fraction * (nc - nq);
    nc -= moved;
    nq = cfg.reset_residual;
    nc += cfg.rethermalization * (cfg.environment_population - nc);
    tr.cycle.push_back(k);
    tr.cable.push_back(nc);
    tr.qubit.push_back(nq);
  }
  return tr;
}

double cooling_floor(const CoolingConfig& cfg) {
  cfg.validate();
  // After the first cycle the qubit always enters at reset_residual.
  const double s = cfg.swap_fraction;
  const double g = cfg.rethermalization;
  const double denom = 1.0 - (1.0 - s) * (1.0 - g);
  if (denom <= 0.0) return cfg.cable_thermal;
  return ((1.0 - g) * s * cfg.reset_residual + g * cfg.environment_population) / denom;
}

BudgetConfig BudgetConfig::from_device(const device::DeviceParams& dev) {
  BudgetConfig c;
  c.cable = dev.cable;
  c.sender_T1 = dev.qubits[1].T1;
  c.receiver_T1 = dev.qubits[2].T1;
  c.kappa_c = dev.coupler_a.kappa_max;
  return c;
}

double InefficiencyBudget::item(const std::string& name) const {
  for (const auto& it : items) {
    if (it.name == name) return it.value;
  }
  throw InvalidParameter("no budget item '" + name + "'");
}

InefficiencyBudget inefficiency_budget(const BudgetConfig& cfg) {
  if (!fraction(cfg.measured_efficiency) || !fraction(cfg.thermal_inefficiency)) {
    throw InvalidParameter("budget: efficiencies must lie in [0, 1]");
  }
  if (!(cfg.kappa_c > 0.0)) throw InvalidParameter("budget: kappa_c must be positive");
  const auto cable = device::cable_derived_params(cfg.cable);

  InefficiencyBudget b;
  b.measured_inefficiency = 1.0 - cfg.measured_efficiency;
  const double cable_loss = std::isinf(cfg.cable.T1_mode) ? 0.0 : cable.per_transit_loss;
  const double joints = 1.0 - device::joint_transmission(cfg.cable);

  const bool decay_a = cfg.sender_T1 > 0.0 && std::isfinite(cfg.sender_T1);
  const bool decay_b = cfg.receiver_T1 > 0.0 && std::isfinite(cfg.receiver_T1);
  double decoherence = 0.0;
  if (decay_a || decay_b) {
    iosim::ChannelParams ch;
    ch.tau_st = cable.tau_st;
    ch.eta = (1.0 - cable_loss) * (1.0 - joints);
    const double dt = iosim::aligned_step(ch.tau_st, cfg.dt_max);
    const double window = pulse::shaped_window(cfg.kappa_c, ch.tau_st);
    const auto pair = pulse::shaped_schedules(cfg.kappa_c, ch.tau_st, window, dt);
    iosim::PitchCatchSetup s;
    s.a.schedule = pair.sender;
    s.b.schedule = pair.receiver;
    s.channel = ch;
    const double clean = iosim::transfer_efficiency(iosim::simulate_pitch_catch(s));
    if (decay_a) s.a.T1 = cfg.sender_T1;
    if (decay_b) s.b.T1 = cfg.receiver_T1;
    const double lossy = iosim::transfer_efficiency(iosim::simulate_pitch_catch(s));
    decoherence = clean - lossy;
  }

  b.items = {{"cable loss", cable_loss},
             {"thermal photons", cfg.thermal_inefficiency},
             {"qubit decoherence", decoherence},
             {"joint loss", joints}};
  for (const auto& it : b.items) b.modeled += it.value;
  b.items.push_back({"control pulse imperfection", b.measured_inefficiency - b.modeled});
  return b;
}

}  // namespace qlink::protocol
