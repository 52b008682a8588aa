#include "qlink/device/device_params.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "qlink/error.hpp"
#include "qlink/units.hpp"
#include "qlink/util/yaml_fields.hpp"

namespace qlink::device {

namespace {

constexpr const char* kQubitNames[4] = {"Q1", "Q2", "Q3", "Q4"};
constexpr double kPlanck = 6.62607015e-34;

void check_fidelity(double f, const std::string& what) {
  if (!(f >= 0.5 && f <= 1.0)) throw InvalidParameter(what + " must lie in [0.5, 1]");
}

QubitParams read_qubit(const YAML::Node& n, const std::string& src, ReadoutFidelity& ro,
                       double& rr) {
  yaml::check_keys(n, src,
                   {"min_freq_ghz", "max_freq_ghz", "idle_freq_ghz", "anharmonicity_mhz",
                    "T1_us", "Tphi_us", "readout_resonator_ghz", "readout_time_us",
                    "readout_F0", "readout_F1", "junction_asymmetry", "L_J_nH"});
  QubitParams q;
  q.omega_min = hz_to_angular(yaml::number(n, "min_freq_ghz", src) * units::GHz);
  q.omega_max = hz_to_angular(yaml::number(n, "max_freq_ghz", src) * units::GHz);
  q.omega_idle = hz_to_angular(yaml::number(n, "idle_freq_ghz", src) * units::GHz);
  q.anharmonicity = hz_to_angular(yaml::number(n, "anharmonicity_mhz", src) * units::MHz);
  q.T1 = yaml::number(n, "T1_us", src) * units::us;
  q.Tphi = yaml::number(n, "Tphi_us", src) * units::us;
  q.junction_asymmetry = yaml::number_or(n, "junction_asymmetry", 1.0, src);
  if (auto lj = yaml::maybe_number(n, "L_J_nH", src)) {
    q.L_J = *lj * units::nH;
  } else {
    if (!(q.anharmonicity < 0.0)) yaml::fail(n, src, "anharmonicity must be negative to derive L_J");
    q.L_J = transmon_junction_inductance(q.omega_idle, q.anharmonicity);
  }
  rr = hz_to_angular(yaml::number_or(n, "readout_resonator_ghz", 0.0, src) * units::GHz);
  ro.F0 = yaml::number_or(n, "readout_F0", 1.0, src);
  ro.F1 = yaml::number_or(n, "readout_F1", 1.0, src);
  ro.readout_time = yaml::number_or(n, "readout_time_us", 0.0, src) * units::us;
  return q;
}

CouplerParams read_coupler(const YAML::Node& n, const std::string& src, bool& fitted) {
  yaml::check_keys(n, src, {"max_coupling_time_ns", "L_g_nH", "L_w_nH", "L_T_nH"});
  CouplerParams c;
  const double t = yaml::number(n, "max_coupling_time_ns", src);
  if (!(t > 0.0)) yaml::fail(n, src, "max_coupling_time_ns must be positive");
  c.kappa_max = 1.0 / (t * units::ns);
  c.L_g = yaml::number_or(n, "L_g_nH", 0.2, src) * units::nH;
  c.L_w = yaml::number_or(n, "L_w_nH", 0.06, src) * units::nH;
  if (auto lt = yaml::maybe_number(n, "L_T_nH", src)) {
    c.L_T = *lt * units::nH;
    fitted = false;
  } else {
    fitted = true;
  }
  return c;
}

JointReadout read_joint(const YAML::Node& n, const std::string& src) {
  yaml::check_keys(n, src, {"F00", "F01", "F10", "F11"});
  JointReadout j;
  j.F = {yaml::number(n, "F00", src), yaml::number(n, "F01", src),
         yaml::number(n, "F10", src), yaml::number(n, "F11", src)};
  return j;
}

}  // namespace

double transmon_junction_inductance(double omega_q, double anharmonicity) {
  if (!(omega_q > 0.0) || !(anharmonicity < 0.0)) {
    throw InvalidParameter("transmon L_J: need positive frequency and negative anharmonicity");
  }
  const double ec = -anharmonicity;
  const double ej = (omega_q + ec) * (omega_q + ec) / (8.0 * ec);  // rad/s
  const double phi0_reduced = kFluxQuantum / kTwoPi;
  const double hbar = kPlanck / kTwoPi;
  return phi0_reduced * phi0_reduced / (hbar * ej);
}

const QubitParams& DeviceParams::qubit(int label) const {
  if (label < 1 || label > 4) throw InvalidParameter("qubit label must be 1..4");
  return qubits[label - 1];
}

const ReadoutFidelity& DeviceParams::readout_of(int label) const {
  if (label < 1 || label > 4) throw InvalidParameter("qubit label must be 1..4");
  return readout[label - 1];
}

void DeviceParams::validate() const {
  for (int i = 0; i < 4; ++i) {
    qubits[i].validate();
    check_fidelity(readout[i].F0, std::string(kQubitNames[i]) + " readout F0");
    check_fidelity(readout[i].F1, std::string(kQubitNames[i]) + " readout F1");
  }
  coupler_a.validate();
  coupler_b.validate();
  if (!(coupler_a.kappa_max > 0.0) || !(coupler_b.kappa_max > 0.0)) {
    throw InvalidParameter("couplers need a positive maximum emission rate");
  }
  check_fidelity(cz_fidelity_12, "C12 CZ fidelity");
  check_fidelity(cz_fidelity_34, "C34 CZ fidelity");
  for (double f : joint_12.F) check_fidelity(f, "Q1Q2 joint readout fidelity");
  for (double f : joint_34.F) check_fidelity(f, "Q3Q4 joint readout fidelity");
  cable.validate();
}

DeviceParams parse_device(const std::string& text, const std::string& source) {
  const YAML::Node root = yaml::parse(text, source);
  if (!root.IsMap()) throw ConfigError(source + ": device file must be a mapping");
  yaml::check_keys(root, source, {"qubits", "couplers", "cz_fidelity", "joint_readout", "cable"});

  DeviceParams d;
  const auto qubits = yaml::require_map(root, "qubits", source);
  yaml::check_keys(qubits, source, {"Q1", "Q2", "Q3", "Q4"});
  for (int i = 0; i < 4; ++i) {
    const auto qn = yaml::require_map(qubits, kQubitNames[i], source);
    d.qubits[i] = read_qubit(qn, source, d.readout[i], d.readout_resonator[i]);
  }

  const auto cab = yaml::require_map(root, "cable", source);
  yaml::check_keys(cab, source,
                   {"length_m", "inductance_nH_per_m", "capacitance_pF_per_m", "mode_T1_us",
                    "mode_T2_us", "thermal_population", "joint_transmission_db", "joints"});
  d.cable.length = yaml::number(cab, "length_m", source);
  d.cable.specific_inductance = yaml::number(cab, "inductance_nH_per_m", source) * units::nH;
  d.cable.specific_capacitance = yaml::number(cab, "capacitance_pF_per_m", source) * units::pF;
  d.cable.T1_mode = yaml::number(cab, "mode_T1_us", source) * units::us;
  d.cable.T2_mode = yaml::number(cab, "mode_T2_us", source) * units::us;
  d.cable.thermal_population = yaml::number_or(cab, "thermal_population", 0.0, source);
  d.cable.joint_transmission_db = yaml::number_or(cab, "joint_transmission_db", 0.0, source);
  d.cable.n_joints = yaml::integer_or(cab, "joints", 0, source);
  try {
    d.cable.validate();
  } catch (const InvalidParameter& e) {
    yaml::fail(cab, source, e.what());
  }
  const double Z0 = cable_derived_params(d.cable).Z0;

  const auto couplers = yaml::require_map(root, "couplers", source);
  yaml::check_keys(couplers, source, {"G_A", "G_B"});
  const auto ga = yaml::require_map(couplers, "G_A", source);
  const auto gb = yaml::require_map(couplers, "G_B", source);
  d.coupler_a = read_coupler(ga, source, d.coupler_a_fitted);
  d.coupler_b = read_coupler(gb, source, d.coupler_b_fitted);
  // G_A drives Q2, G_B drives Q3.
  if (d.coupler_a_fitted) d.coupler_a.L_T = fit_coupler_inductance(d.coupler_a, d.qubits[1], Z0);
  if (d.coupler_b_fitted) d.coupler_b.L_T = fit_coupler_inductance(d.coupler_b, d.qubits[2], Z0);

  if (const auto cz = root["cz_fidelity"]) {
    yaml::check_keys(cz, source, {"C12", "C34"});
    d.cz_fidelity_12 = yaml::number_or(cz, "C12", 1.0, source);
    d.cz_fidelity_34 = yaml::number_or(cz, "C34", 1.0, source);
  }
  if (const auto jr = root["joint_readout"]) {
    yaml::check_keys(jr, source, {"Q1Q2", "Q3Q4"});
    if (jr["Q1Q2"]) d.joint_12 = read_joint(jr["Q1Q2"], source);
    if (jr["Q3Q4"]) d.joint_34 = read_joint(jr["Q3Q4"], source);
  }

  try {
    d.validate();
  } catch (const InvalidParameter& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return d;
}

DeviceParams load_device(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open device file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_device(ss.str(), path);
}

DeviceParams DeviceParams::defaults() {
  DeviceParams d;
  struct Row {
    double fmin, fmax, fidle, anh, t1, tphi, rr, f0, f1;
  };
  const Row rows[4] = {
      {3.778, 4.716, 3.7894, -207, 37.1, 22.8, 4.9153, 0.996, 0.980},
      {3.926, 4.771, 3.9331, -191, 34.7, 26.3, 4.9562, 0.992, 0.977},
      {3.935, 4.898, 3.9356, -194, 33.6, 62.6, 4.9559, 0.993, 0.973},
      {3.643, 4.636, 3.6430, -212, 20.1, 33.6, 4.9153, 0.996, 0.977},
  };
  for (int i = 0; i < 4; ++i) {
    const Row& r = rows[i];
    auto& q = d.qubits[i];
    q.omega_min = hz_to_angular(r.fmin * units::GHz);
    q.omega_max = hz_to_angular(r.fmax * units::GHz);
    q.omega_idle = hz_to_angular(r.fidle * units::GHz);
    q.anharmonicity = hz_to_angular(r.anh * units::MHz);
    q.T1 = r.t1 * units::us;
    q.Tphi = r.tphi * units::us;
    q.junction_asymmetry = 4.7;
    q.L_J = transmon_junction_inductance(q.omega_idle, q.anharmonicity);
    d.readout_resonator[i] = hz_to_angular(r.rr * units::GHz);
    d.readout[i] = {r.f0, r.f1, 0.7 * units::us};
  }
  d.cable.length = 64.0;
  d.cable.specific_inductance = 200.0 * units::nH;
  d.cable.specific_capacitance = 86.5 * units::pF;
  d.cable.T1_mode = 56.2 * units::us;
  d.cable.T2_mode = 106.8 * units::us;
  d.cable.thermal_population = 0.015;
  d.cable.joint_transmission_db = -0.015;
  d.cable.n_joints = 3;
  const double Z0 = cable_derived_params(d.cable).Z0;

  d.coupler_a.kappa_max = 1.0 / (22.0 * units::ns);
  d.coupler_b.kappa_max = 1.0 / (18.0 * units::ns);
  d.coupler_a.L_T = fit_coupler_inductance(d.coupler_a, d.qubits[1], Z0);
  d.coupler_b.L_T = fit_coupler_inductance(d.coupler_b, d.qubits[2], Z0);
  d.coupler_a_fitted = d.coupler_b_fitted = true;

  d.cz_fidelity_12 = 0.973;
  d.cz_fidelity_34 = 0.982;
  d.joint_12.F = {0.954, 0.924, 0.945, 0.915};
  d.joint_34.F = {0.965, 0.948, 0.956, 0.942};
  return d;
}

std::string dump_device(const DeviceParams& d) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap << YAML::Key << "qubits" << YAML::Value << YAML::BeginMap;
  for (int i = 0; i < 4; ++i) {
    const auto& q = d.qubits[i];
    out << YAML::Key << kQubitNames[i] << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "min_freq_ghz" << YAML::Value << angular_to_hz(q.omega_min) / units::GHz;
    out << YAML::Key << "max_freq_ghz" << YAML::Value << angular_to_hz(q.omega_max) / units::GHz;
    out << YAML::Key << "idle_freq_ghz" << YAML::Value << angular_to_hz(q.omega_idle) / units::GHz;
    out << YAML::Key << "anharmonicity_mhz" << YAML::Value
        << angular_to_hz(q.anharmonicity) / units::MHz;
    out << YAML::Key << "T1_us" << YAML::Value << q.T1 / units::us;
    out << YAML::Key << "Tphi_us" << YAML::Value << q.Tphi / units::us;
    out << YAML::Key << "readout_resonator_ghz" << YAML::Value
        << angular_to_hz(d.readout_resonator[i]) / units::GHz;
    out << YAML::Key << "readout_time_us" << YAML::Value << d.readout[i].readout_time / units::us;
    out << YAML::Key << "readout_F0" << YAML::Value << d.readout[i].F0;
    out << YAML::Key << "readout_F1" << YAML::Value << d.readout[i].F1;
    out << YAML::Key << "junction_asymmetry" << YAML::Value << q.junction_asymmetry;
    out << YAML::Key << "L_J_nH" << YAML::Value << q.L_J / units::nH;
    out << YAML::EndMap;
  }
  out << YAML::EndMap;

  auto coupler = [&](const char* name, const CouplerParams& c) {
    out << YAML::Key << name << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "max_coupling_time_ns" << YAML::Value << 1.0 / c.kappa_max / units::ns;
    out << YAML::Key << "L_g_nH" << YAML::Value << c.L_g / units::nH;
    out << YAML::Key << "L_w_nH" << YAML::Value << c.L_w / units::nH;
    out << YAML::Key << "L_T_nH" << YAML::Value << c.L_T / units::nH;
    out << YAML::EndMap;
  };
  out << YAML::Key << "couplers" << YAML::Value << YAML::BeginMap;
  coupler("G_A", d.coupler_a);
  coupler("G_B", d.coupler_b);
  out << YAML::EndMap;

  out << YAML::Key << "cz_fidelity" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "C12" << YAML::Value << d.cz_fidelity_12;
  out << YAML::Key << "C34" << YAML::Value << d.cz_fidelity_34;
  out << YAML::EndMap;

  auto joint = [&](const char* name, const JointReadout& j) {
    out << YAML::Key << name << YAML::Value << YAML::Flow << YAML::BeginMap;
    const char* keys[4] = {"F00", "F01", "F10", "F11"};
    for (int k = 0; k < 4; ++k) out << YAML::Key << keys[k] << YAML::Value << j.F[k];
    out << YAML::EndMap;
  };
  out << YAML::Key << "joint_readout" << YAML::Value << YAML::BeginMap;
  joint("Q1Q2", d.joint_12);
  joint("Q3Q4", d.joint_34);
  out << YAML::EndMap;

  const auto& c = d.cable;
  out << YAML::Key << "cable" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "length_m" << YAML::Value << c.length;
  out << YAML::Key << "inductance_nH_per_m" << YAML::Value << c.specific_inductance / units::nH;
  out << YAML::Key << "capacitance_pF_per_m" << YAML::Value << c.specific_capacitance / units::pF;
  out << YAML::Key << "mode_T1_us" << YAML::Value << c.T1_mode / units::us;
  out << YAML::Key << "mode_T2_us" << YAML::Value << c.T2_mode / units::us;
  out << YAML::Key << "thermal_population" << YAML::Value << c.thermal_population;
  out << YAML::Key << "joint_transmission_db" << YAML::Value << c.joint_transmission_db;
  out << YAML::Key << "joints" << YAML::Value << c.n_joints;
  out << YAML::EndMap;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace qlink::device
