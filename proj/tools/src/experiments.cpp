#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>

#include "qlink/error.hpp"
#include "qlink/iosim/pitch_catch.hpp"
#include "qlink/multimode/multimode.hpp"
#include "qlink/protocol/analysis.hpp"
#include "qlink/protocol/budget.hpp"
#include "qlink/pulse/calibration.hpp"
#include "qlink/pulse/schedule.hpp"
#include "qlink/tomography/serialize.hpp"
#include "qlink/units.hpp"
#include "qlink/util/csv.hpp"
#include "qlink/util/rng.hpp"

namespace qlink::cli {

namespace fs = std::filesystem;
using namespace qlink::units;

namespace {

std::vector<double> linspace(double a, double b, int n) {
  if (n < 1) throw InvalidParameter("grid needs at least one point");
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = n == 1 ? a : a + (b - a) * i / (n - 1);
  return v;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError("invalid parameter: " + what);
}

struct Out {
  const RunContext& ctx;
  RunOutput& res;
  std::string path(const std::string& name) {
    fs::create_directories(ctx.out_dir);
    res.files.push_back(name);
    return (ctx.out_dir / name).string();
  }
  void text(const std::string& name, const std::string& body) {
    std::ofstream f(path(name));
    f << body;
    if (body.empty() || body.back() != '\n') f << '\n';
  }
};

double kappa_default(const device::DeviceParams& d) {
  return std::min(d.coupler_a.kappa_max, d.coupler_b.kappa_max);
}

// Noise overrides shared by the protocol experiments.
protocol::NoiseConfig read_noise(Params& p, const device::DeviceParams& dev) {
  Params& n = p.section("noise");
  const bool ideal = n.flag("ideal", false);
  const double eta = n.number("transfer_efficiency", ideal ? 1.0 : 0.904);
  protocol::NoiseConfig cfg = ideal ? protocol::NoiseConfig::ideal() : protocol::NoiseConfig::from_device(dev, eta);
  cfg.transfer_efficiency = eta;
  cfg.feedforward_latency = n.number("feedforward_latency_us", cfg.feedforward_latency / us) * us;
  cfg.gate_duration = n.number("gate_duration_us", cfg.gate_duration / us) * us;
  cfg.transfer_duration = n.number("transfer_duration_ns", cfg.transfer_duration / ns) * ns;
  cfg.p_single = n.number("p_single", cfg.p_single);
  cfg.p_cz12 = n.number("p_cz12", cfg.p_cz12);
  cfg.p_cz34 = n.number("p_cz34", cfg.p_cz34);
  if (n.flag("perfect_readout", false)) {
    for (auto& c : cfg.confusion) c.setIdentity();
    cfg.joint12.setIdentity();
    cfg.joint34.setIdentity();
  }
  if (!n.flag("qubit_decay", true)) {
    for (auto& q : cfg.qubits) q = {};
  }
  return cfg;
}

protocol::ReadoutMode read_readout(Params& p, const std::string& fallback) {
  const auto m = p.choice("readout", fallback, {"raw", "corrected", "ideal"});
  if (m == "corrected") return protocol::ReadoutMode::Corrected;
  if (m == "ideal") return protocol::ReadoutMode::Ideal;
  return protocol::ReadoutMode::Raw;
}

const char* kBranch[4] = {"00", "01", "10", "11"};

json parsed(const std::string& text) { return json::parse(text); }

// ---------------------------------------------------------------------------

RunOutput chevron(Params& p, const RunContext& ctx) {
  const auto cable = device::cable_derived_params(ctx.device.cable);
  multimode::ChevronConfig cfg;
  cfg.g = hz_to_angular(p.number("coupling_mhz", 0.08) * MHz);
  cfg.half_width = p.integer("half_width", 100);
  cfg.m0 = p.integer("center_mode", cfg.m0);
  const double span = p.number("detuning_span_mhz", 10.0);
  const int nd = p.integer("detunings", 100);
  const double duration = p.number("duration_us", 5.0);
  const int nt = p.integer("times", 300);
  cfg.side = p.choice("cable_end", "far", {"near", "far"}) == "far" ? multimode::CableEnd::Far
                                                                     : multimode::CableEnd::Near;
  p.finish();
  require(cfg.g > 0 && cfg.half_width >= 0 && span > 0 && nd >= 2 && duration > 0 && nt >= 2,
          "chevron grid must be positive with at least two points per axis");
  cfg.omega_fsr = cable.omega_fsr;
  cfg.workers = ctx.workers;
  for (double d : linspace(-span / 2, span / 2, nd)) cfg.detunings.push_back(hz_to_angular(d * MHz));
  cfg.times = linspace(0.0, duration * us, nt);

  RunOutput res;
  Out out{ctx, res};
  const auto map = multimode::chevron_scan(cfg);
  multimode::write_population_map(out.path("population_map.csv"), out.path("population_map.json"), map, cfg);

  std::size_t row = 0;
  for (std::size_t i = 1; i < map.axis_detuning.size(); ++i) {
    if (std::abs(map.axis_detuning[i]) < std::abs(map.axis_detuning[row])) row = i;
  }
  std::vector<double> p1(cfg.times.size());
  for (std::size_t j = 0; j < p1.size(); ++j) {
    p1[j] = map.p1(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(j));
  }
  const auto centres = multimode::chevron_centres(map);
  res.summary["fsr_mhz"] = angular_to_hz(cable.omega_fsr) / MHz;
  res.summary["chevrons"] = centres.size();
  const double spacing = multimode::chevron_spacing(map);
  if (std::isfinite(spacing)) res.summary["chevron_spacing_mhz"] = angular_to_hz(spacing) / MHz;
  const double onset = multimode::revival_onset(cfg.times, p1, cable.tau_st);
  if (std::isfinite(onset)) res.summary["revival_onset_ns"] = onset / ns;
  res.summary["round_trip_ns"] = 2 * cable.tau_st / ns;
  return res;
}

RunOutput mode_coherence(Params& p, const RunContext& ctx) {
  multimode::CoherenceConfig cfg;
  const auto kind = p.choice("measurement", "t1", {"t1", "ramsey"});
  cfg.kind = kind == "t1" ? multimode::CoherenceKind::T1 : multimode::CoherenceKind::Ramsey;
  const double wait_max = p.number("wait_max_us", kind == "t1" ? 150.0 : 250.0);
  const int points = p.integer("points", 61);
  cfg.g_swap = hz_to_angular(p.number("swap_coupling_mhz", 0.08) * MHz);
  cfg.ramsey_detuning = hz_to_angular(p.number("ramsey_detuning_khz", 50.0) * kHz);
  cfg.pure_dephasing = p.flag("pure_dephasing", true);
  cfg.neighbor_modes = p.integer("neighbor_modes", 0);
  p.finish();
  require(wait_max > 0 && points >= 4, "wait_max_us > 0 and points >= 4");
  cfg.wait = linspace(0.0, wait_max * us, points);

  RunOutput res;
  Out out{ctx, res};
  const auto r = multimode::mode_coherence_experiment(cfg, ctx.device.cable);
  CsvWriter w(out.path("coherence.csv"), {"wait_us", "p1"});
  for (std::size_t i = 0; i < r.wait.size(); ++i) w.row({r.wait[i] / us, r.p1[i]});
  res.summary["measurement"] = kind;
  res.summary["non_decaying"] = r.non_decaying;
  if (!r.non_decaying) {
    res.summary["time_constant_us"] = r.time_constant / us;
    res.summary["time_constant_error_us"] = r.time_constant_error / us;
  }
  res.summary["fit_residual_rms"] = r.fit_residual_rms;
  return res;
}

struct ShapedLink {
  iosim::PitchCatchSetup setup;
  double kappa_c = 0.0;
  double window = 0.0;
};

ShapedLink shaped_link(Params& p, const RunContext& ctx, bool lossless_default) {
  ShapedLink l;
  l.kappa_c = p.number("kappa_c_per_us", kappa_default(ctx.device) * us) / us;
  const double window_ns = p.number("window_ns", 0.0);
  const double dt_ns = p.number("dt_ns", 0.05);
  const bool lossless = p.flag("lossless", lossless_default);
  require(l.kappa_c > 0 && window_ns >= 0 && dt_ns > 0, "kappa_c_per_us and dt_ns must be positive");
  l.setup.channel = iosim::ChannelParams::from_cable(ctx.device.cable);
  if (lossless) l.setup.channel.eta = 1.0;
  l.window = window_ns > 0 ? window_ns * ns : pulse::shaped_window(l.kappa_c, l.setup.channel.tau_st);
  const double dt = iosim::aligned_step(l.setup.channel.tau_st, dt_ns * ns);
  const auto pair = pulse::shaped_schedules(l.kappa_c, l.setup.channel.tau_st, l.window, dt,
                                            ctx.device.coupler_a.kappa_max, ctx.device.coupler_b.kappa_max);
  l.setup.a.schedule = pair.sender;
  l.setup.b.schedule = pair.receiver;
  return l;
}

RunOutput transfer(Params& p, const RunContext& ctx) {
  auto link = shaped_link(p, ctx, false);
  const double mismatch = p.number("mismatch_mhz", 0.0);
  const bool decay = p.flag("qubit_decay", false);
  const int stride = p.integer("stride", 10);
  p.finish();
  require(stride >= 1, "stride >= 1");
  auto& s = link.setup;
  s.b.detuning_offset = hz_to_angular(mismatch * MHz);
  if (decay) {
    s.a.T1 = ctx.device.qubits[1].T1;
    s.b.T1 = ctx.device.qubits[2].T1;
  }
  const double Z0 = device::cable_derived_params(ctx.device.cable).Z0;
  auto with_flux = [&](pulse::PulseSchedule sc, const device::CouplerParams& c, const device::QubitParams& q) {
    sc.flux = pulse::kappa_to_flux(sc, c, q, Z0);
    sc.delta_omega_comp = pulse::compensation_schedule(sc, q, c, Z0);
    return sc;
  };
  const auto wa = with_flux(s.a.schedule, ctx.device.coupler_a, ctx.device.qubits[1]);
  const auto wb = with_flux(s.b.schedule, ctx.device.coupler_b, ctx.device.qubits[2]);

  RunOutput res;
  Out out{ctx, res};
  const auto traj = iosim::simulate_pitch_catch(s);
  iosim::write_trajectory_csv(out.path("trajectory.csv"), traj, static_cast<std::size_t>(stride));
  pulse::write_waveform_csv(out.path("waveform_sender.csv"), wa);
  pulse::write_waveform_csv(out.path("waveform_receiver.csv"), wb);
  res.summary["efficiency"] = iosim::transfer_efficiency(traj);
  res.summary["channel_eta"] = s.channel.eta;
  res.summary["tau_ns"] = s.channel.tau_st / ns;
  res.summary["window_ns"] = link.window / ns;
  res.summary["kappa_c_per_us"] = link.kappa_c * us;
  return res;
}

RunOutput mismatch_scan(Params& p, const RunContext& ctx) {
  auto link = shaped_link(p, ctx, true);
  const double lo = p.number("mismatch_min_mhz", -3.0);
  const double hi = p.number("mismatch_max_mhz", 3.0);
  const int n = p.integer("points", 61);
  p.finish();
  require(n >= 1 && hi >= lo, "mismatch grid");
  std::vector<double> grid;
  for (double x : linspace(lo, hi, n)) grid.push_back(x * MHz);

  RunOutput res;
  Out out{ctx, res};
  const auto c = iosim::mismatch_scan(link.setup, grid, ctx.workers);
  CsvWriter w(out.path("mismatch.csv"), {"mismatch_mhz", "inefficiency"});
  for (std::size_t i = 0; i < c.x.size(); ++i) w.row({c.x[i] / MHz, c.y[i]});
  res.summary["min_inefficiency"] = *std::min_element(c.y.begin(), c.y.end());
  for (std::size_t i = 0; i + 1 < c.x.size(); ++i) {
    const double a = c.x[i] / MHz, b = c.x[i + 1] / MHz;
    if (a <= 2.0 && b >= 2.0 && b > a) {
      res.summary["inefficiency_at_2mhz"] = c.y[i] + (c.y[i + 1] - c.y[i]) * (2.0 - a) / (b - a);
      break;
    }
  }
  if (c.x.size() == 1) res.summary["inefficiency"] = c.y[0];
  return res;
}

RunOutput emission_scan(Params& p, const RunContext& ctx) {
  const auto node = p.choice("node", "a", {"a", "b"});
  const double lo = p.number("flux_min", 0.0);
  const double hi = p.number("flux_max", 0.5);
  const int n = p.integer("points", 41);
  const double dt_ns = p.number("dt_ns", 0.05);
  p.finish();
  require(n >= 1 && hi >= lo && dt_ns > 0, "flux grid");
  const bool a = node == "a";
  const auto& coupler = a ? ctx.device.coupler_a : ctx.device.coupler_b;
  const auto& qubit = ctx.device.qubits[a ? 1 : 2];

  RunOutput res;
  Out out{ctx, res};
  const auto pts = iosim::static_emission_scan(coupler, qubit, ctx.device.cable, linspace(lo, hi, n),
                                               dt_ns * ns, ctx.workers);
  CsvWriter w(out.path("emission_rate.csv"),
              {"flux", "kappa_model_per_us", "kappa_fit_per_us", "kappa_fit_error_per_us", "below_detection"});
  double best = 0.0;
  int hidden = 0;
  for (const auto& e : pts) {
    w.row({e.flux, e.kappa_model * us, e.kappa_fit * us, e.kappa_fit_error * us, e.below_detection ? 1.0 : 0.0});
    if (!e.below_detection) best = std::max(best, e.kappa_fit);
    hidden += e.below_detection ? 1 : 0;
  }
  res.summary["kappa_max_fit_per_us"] = best * us;
  res.summary["kappa_max_device_per_us"] = coupler.kappa_max * us;
  res.summary["below_detection"] = hidden;
  return res;
}

RunOutput calibrate(Params& p, const RunContext& ctx) {
  pulse::CalibrationConfig cfg;
  cfg.kappa_c = p.number("kappa_c_per_us", kappa_default(ctx.device) * us) / us;
  const double lo = p.number("alpha_min", 0.1);
  const double hi = p.number("alpha_max", 0.9);
  const int n = p.integer("points", 9);
  const auto scales = p.numbers("kappa_scales", {0.8, 1.0, 1.2});
  cfg.distortion.timing_skew = p.number("timing_skew_ns", 0.0) * ns;
  cfg.flat_threshold = p.number("flat_threshold", cfg.flat_threshold);
  p.finish();
  require(n >= 3 && lo > 0 && hi < 1 && hi > lo, "alpha grid inside (0, 1) with at least three points");
  cfg.channel = iosim::ChannelParams::from_cable(ctx.device.cable);
  cfg.workers = ctx.workers;
  const auto grid = linspace(lo, hi, n);

  RunOutput res;
  Out out{ctx, res};
  std::vector<pulse::CalibrationResult> runs;
  std::vector<std::string> header{"alpha", "ideal"};
  for (double s : scales) {
    require(s > 0, "kappa_scales must be positive");
    cfg.distortion.kappa_scale = s;
    runs.push_back(pulse::calibration_scan(grid, cfg));
    header.push_back("residual_scale_" + format_double(s));
  }
  CsvWriter w(out.path("calibration.csv"), header);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::vector<double> row{grid[i], 1 - grid[i]};
    for (const auto& r : runs) row.push_back(r.residual[i]);
    w.row(row);
  }
  for (std::size_t k = 0; k < scales.size(); ++k) {
    json e;
    e["kappa_scale"] = scales[k];
    e["verdict"] = pulse::to_string(runs[k].verdict);
    e["max_abs_deviation"] = runs[k].max_abs_deviation;
    e["curvature"] = runs[k].c2;
    res.summary["scale_" + format_double(scales[k])] = e;
  }
  return res;
}

double bell_fidelity(const protocol::DensityMatrix& rho) {
  const auto psi = protocol::bell_target();
  return (psi.adjoint() * rho.matrix() * psi)(0, 0).real();
}

RunOutput entangle(Params& p, const RunContext& ctx) {
  const double alpha = p.number("alpha", 0.5);
  const auto noise = read_noise(p, ctx.device);
  const int shots = p.integer("shots", 4096);
  const int repeats = p.integer("repeats", 0);
  const bool envelopes = p.flag("envelopes", true);
  const double kappa_c = p.number("kappa_c_per_us", kappa_default(ctx.device) * us) / us;
  p.finish();
  require(alpha >= 0 && alpha <= 1, "alpha in [0, 1]");
  require(shots >= 1 && repeats >= 0 && kappa_c > 0, "shots >= 1, repeats >= 0");
  noise.validate();

  RunOutput res;
  Out out{ctx, res};
  const auto rho = protocol::entangle_remote(noise, alpha);
  out.text("bell_state.json", tomography::state_json(rho));
  tomography::write_bar_csv(out.path("bell_state_bar.csv"), rho.matrix(), tomography::computational_labels(2));
  res.summary["fidelity"] = bell_fidelity(rho);
  res.summary["p01"] = rho.matrix()(1, 1).real();
  res.summary["p10"] = rho.matrix()(2, 2).real();
  res.summary["coherence_01_10"] = std::abs(rho.matrix()(1, 2));

  if (envelopes) {
    iosim::PitchCatchSetup s;
    s.channel = iosim::ChannelParams::from_cable(ctx.device.cable);
    const double window = pulse::shaped_window(kappa_c, s.channel.tau_st);
    const double dt = iosim::aligned_step(s.channel.tau_st);
    s.a.schedule = pulse::fractional_schedule(kappa_c, alpha, window, dt);
    s.b.schedule = pulse::shaped_schedules(kappa_c, s.channel.tau_st, window, dt).receiver;
    const auto traj = iosim::simulate_pitch_catch(s);
    iosim::write_trajectory_csv(out.path("envelopes.csv"), traj, 10);
    res.summary["receiver_population"] = iosim::transfer_efficiency(traj);
  }
  if (repeats > 0) {
    const auto st = tomography::repeat_statistics(
        [&](Rng& rng) { return protocol::sampled_bell_fidelity(noise, shots, rng); }, repeats, ctx.seed,
        ctx.workers);
    res.summary["sampled_mean"] = st.mean;
    res.summary["sampled_std"] = st.stddev;
    res.summary["sampled_seed"] = st.seed;
  }
  return res;
}

RunOutput teleport(Params& p, const RunContext& ctx) {
  const auto which = p.choice("mode", "feedforward", {"feedforward", "postselect", "both"});
  const auto readout = read_readout(p, "raw");
  const auto noise = read_noise(p, ctx.device);
  const int shots = p.integer("shots", 4096);
  const int repeats = p.integer("repeats", 0);
  const bool states = p.flag("write_states", true);
  p.finish();
  require(shots >= 1 && repeats >= 0, "shots >= 1, repeats >= 0");
  noise.validate();

  std::vector<protocol::TeleportMode> modes;
  if (which != "postselect") modes.push_back(protocol::TeleportMode::FeedForward);
  if (which != "feedforward") modes.push_back(protocol::TeleportMode::PostSelect);

  RunOutput res;
  Out out{ctx, res};
  res.summary["readout"] = protocol::to_string(readout);
  for (std::size_t k = 0; k < modes.size(); ++k) {
    const auto mode = modes[k];
    const std::string tag = protocol::to_string(mode);
    const auto proc = protocol::teleport_process(mode, noise, readout);
    json m;
    m["average"] = proc.average;
    for (int b = 0; b < 4; ++b) {
      m["branch_" + std::string(kBranch[b])] = proc.branch_fidelity[static_cast<std::size_t>(b)];
      out.text("chi_" + tag + "_" + kBranch[b] + ".json", tomography::process_json(proc.chi[static_cast<std::size_t>(b)]));
      tomography::write_bar_csv(out.path("chi_" + tag + "_" + kBranch[b] + "_bar.csv"),
                                proc.chi[static_cast<std::size_t>(b)].chi, proc.chi[static_cast<std::size_t>(b)].labels());
    }
    for (int b = 0; b < 4; ++b) m["probability_" + std::string(kBranch[b])] = proc.probabilities[static_cast<std::size_t>(b)];
    if (states) {
      json doc;
      doc["mode"] = tag;
      doc["inputs"] = {"0", "0-i1", "0+1", "1"};
      for (int b = 0; b < 4; ++b) {
        json list = json::array();
        for (const auto& rho : proc.outputs[static_cast<std::size_t>(b)]) list.push_back(parsed(tomography::state_json(rho)));
        doc["branches"][kBranch[b]] = list;
      }
      out.text("states_" + tag + ".json", doc.dump(2));
    }
    if (repeats > 0) {
      const auto st = tomography::repeat_statistics(
          [&](Rng& rng) { return protocol::sampled_teleport_fidelity(mode, noise, shots, rng, readout); },
          repeats, derive_seed(ctx.seed, k), ctx.workers);
      m["sampled_mean"] = st.mean;
      m["sampled_std"] = st.stddev;
      m["sampled_seed"] = st.seed;
    }
    res.summary[tag] = m;
  }
  return res;
}

RunOutput teleport_cnot(Params& p, const RunContext& ctx) {
  const auto readout = read_readout(p, "raw");
  const auto noise = read_noise(p, ctx.device);
  p.finish();
  noise.validate();

  RunOutput res;
  Out out{ctx, res};
  const auto proc = protocol::cnot_process(noise, readout);
  out.text("chi_cnot.json", tomography::process_json(proc.chi));
  tomography::write_bar_csv(out.path("chi_cnot_bar.csv"), proc.chi.chi, proc.chi.labels());
  res.summary["readout"] = protocol::to_string(readout);
  res.summary["fidelity"] = proc.fidelity;
  res.summary["max_abs_real"] = proc.chi.chi.real().cwiseAbs().maxCoeff();
  res.summary["max_abs_imag"] = proc.chi.chi.imag().cwiseAbs().maxCoeff();
  return res;
}

RunOutput cooling(Params& p, const RunContext& ctx) {
  protocol::CoolingConfig cfg;
  cfg.n_cycles = p.integer("cycles", cfg.n_cycles);
  cfg.qubit_thermal = p.number("qubit_thermal", cfg.qubit_thermal);
  cfg.cable_thermal = p.number("cable_thermal", cfg.cable_thermal);
  cfg.swap_fraction = p.number("swap_fraction", cfg.swap_fraction);
  cfg.reset_residual = p.number("reset_residual", cfg.reset_residual);
  cfg.rethermalization = p.number("rethermalization", cfg.rethermalization);
  cfg.environment_population = p.number("environment_population", cfg.environment_population);
  p.finish();
  cfg.validate();

  RunOutput res;
  Out out{ctx, res};
  const auto tr = protocol::active_cooling_sim(cfg);
  CsvWriter w(out.path("cooling.csv"), {"cycle", "cable_population", "qubit_population"});
  for (std::size_t i = 0; i < tr.cycle.size(); ++i) w.row({double(tr.cycle[i]), tr.cable[i], tr.qubit[i]});
  res.summary["initial_cable"] = tr.cable.front();
  res.summary["final_cable"] = tr.cable.back();
  res.summary["floor"] = protocol::cooling_floor(cfg);
  return res;
}

void budget_table(const protocol::InefficiencyBudget& b, Out& out, json& summary) {
  CsvWriter w(out.path("budget.csv"), {"item", "inefficiency_percent"});
  for (const auto& it : b.items) {
    w.row({it.name}, {100 * it.value});
    summary[it.name] = it.value;
  }
  summary["modeled"] = b.modeled;
  summary["measured_inefficiency"] = b.measured_inefficiency;
}

RunOutput budget(Params& p, const RunContext& ctx) {
  auto cfg = protocol::BudgetConfig::from_device(ctx.device);
  cfg.measured_efficiency = p.number("measured_efficiency", cfg.measured_efficiency);
  cfg.thermal_inefficiency = p.number("thermal_inefficiency", cfg.thermal_inefficiency);
  cfg.kappa_c = p.number("kappa_c_per_us", cfg.kappa_c * us) / us;
  if (!p.flag("qubit_decay", true)) cfg.sender_T1 = cfg.receiver_T1 = 0.0;
  p.finish();
  RunOutput res;
  Out out{ctx, res};
  budget_table(protocol::inefficiency_budget(cfg), out, res.summary);
  return res;
}

RunOutput tomography_run(Params& p, const RunContext& ctx) {
  const auto target = p.choice("target", "transfer", {"transfer", "bell"});
  const auto readout = read_readout(p, "corrected");
  const auto noise = read_noise(p, ctx.device);
  p.finish();
  noise.validate();

  RunOutput res;
  Out out{ctx, res};
  res.summary["target"] = target;
  if (target == "transfer") {
    const auto proc = protocol::transfer_process(noise);
    out.text("chi_transfer.json", tomography::process_json(proc.chi));
    tomography::write_bar_csv(out.path("chi_transfer_bar.csv"), proc.chi.chi, proc.chi.labels());
    res.summary["process_fidelity"] = proc.fidelity;
  } else {
    const auto rho = protocol::tomograph(protocol::entangle_remote(noise), protocol::kron(noise.confusion[1], noise.confusion[2]),
                                         readout);
    out.text("bell_state.json", tomography::state_json(rho));
    tomography::write_bar_csv(out.path("bell_state_bar.csv"), rho.matrix(), tomography::computational_labels(2));
    res.summary["readout"] = protocol::to_string(readout);
    res.summary["fidelity"] = bell_fidelity(rho);
  }
  return res;
}

RunOutput crosscheck(Params& p, const RunContext& ctx) {
  const double g = hz_to_angular(p.number("coupling_mhz", 1.63) * MHz);
  const int half = p.integer("half_width", 100);
  const double span = p.number("duration_transits", 3.0);
  const int n = p.integer("points", 801);
  p.finish();
  require(g > 0 && half >= 1 && span > 0 && n >= 2, "crosscheck grid");
  const auto cable = device::cable_derived_params(ctx.device.cable);
  const auto ts = linspace(0.0, span * cable.tau_st, n);
  const auto ladder = multimode::resonant_ladder(g, cable.omega_fsr, half, ts);
  iosim::ChannelParams ch;
  ch.tau_st = cable.tau_st;
  const double dt = iosim::aligned_step(ch.tau_st);
  iosim::NodeDrive a;
  a.schedule = pulse::constant_schedule(device::emission_rate_from_coupling(g, cable.omega_fsr), span * cable.tau_st, dt);
  const auto io = iosim::simulate_free_emission(a, ch);

  RunOutput res;
  Out out{ctx, res};
  CsvWriter w(out.path("crosscheck.csv"), {"t_ns", "p1_multimode", "p1_input_output"});
  double s = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const auto k = std::min(io.size() - 1, static_cast<std::size_t>(std::llround(ts[i] / dt)));
    const double pm = ladder.populations(static_cast<Eigen::Index>(i), 0);
    const double pi = std::norm(io.sigma2[k]);
    w.row({ts[i] / ns, pm, pi});
    s += (pm - pi) * (pm - pi);
  }
  res.summary["rms_difference"] = std::sqrt(s / static_cast<double>(ts.size()));
  res.summary["kappa_per_us"] = device::emission_rate_from_coupling(g, cable.omega_fsr) * us;
  return res;
}

}  // namespace

RunOutput run_experiment(const std::string& kind, Params& params, const RunContext& ctx) {
  static const std::map<std::string, std::function<RunOutput(Params&, const RunContext&)>> table = {
      {"chevron", chevron},
      {"mode-coherence", mode_coherence},
      {"transfer", transfer},
      {"mismatch-scan", mismatch_scan},
      {"emission-scan", emission_scan},
      {"calibrate", calibrate},
      {"entangle", entangle},
      {"teleport", teleport},
      {"teleport-cnot", teleport_cnot},
      {"cooling", cooling},
      {"budget", budget},
      {"tomography", tomography_run},
      {"crosscheck", crosscheck},
  };
  const auto it = table.find(kind);
  if (it == table.end()) throw ConfigError("unknown experiment '" + kind + "'");
  RunOutput res = it->second(params, ctx);
  res.params = params.resolved();
  return res;
}

}  // namespace qlink::cli
