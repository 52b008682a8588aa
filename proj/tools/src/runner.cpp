#include "runner.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <algorithm>
#include <sstream>

#include "qlink/error.hpp"
#include "qlink/util/csv.hpp"
#include "qlink/util/parallel.hpp"
#include "qlink/util/rng.hpp"

#ifndef QLINK_VERSION
#define QLINK_VERSION "unknown"
#endif
#ifndef QLINK_DEFAULT_SCENARIO_DIR
#define QLINK_DEFAULT_SCENARIO_DIR "scenarios"
#endif

namespace qlink::cli {

namespace fs = std::filesystem;

fs::path output_root(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("QLINK_OUTPUT_DIR"); env && *env) return env;
  return "qlink_out";
}

fs::path scenario_dir() {
  if (const char* env = std::getenv("QLINK_SCENARIO_DIR"); env && *env) return env;
  return QLINK_DEFAULT_SCENARIO_DIR;
}

fs::path scenario_output_dir(const Scenario& sc, const fs::path& root) {
  if (sc.output.empty()) return root / sc.name;
  const fs::path p(sc.output);
  return p.is_absolute() ? p : root / p;
}

namespace {

void write_text(const fs::path& p, const std::string& body) {
  std::ofstream f(p);
  if (!f) throw Error("cannot write " + p.string());
  f << body;
}

// Summary scalars flattened with dotted keys, in document order.
void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, double>>& out) {
  for (const auto& [k, v] : j.items()) {
    const std::string key = prefix.empty() ? k : prefix + "." + k;
    if (v.is_object()) {
      flatten(v, key, out);
    } else if (v.is_boolean()) {
      out.emplace_back(key, v.get<bool>() ? 1.0 : 0.0);
    } else if (v.is_number()) {
      out.emplace_back(key, v.get<double>());
    }
  }
}

}  // namespace

RunOutput run_scenario(const Scenario& sc, const fs::path& dir, int workers, const std::string& command) {
  RunContext ctx;
  ctx.device = resolve_device(sc);
  ctx.seed = derive_seed(sc.seed, sc.point_index);
  ctx.workers = workers;
  ctx.out_dir = dir;
  Params params(sc.params, sc.source);
  RunOutput out = run_experiment(sc.kind, params, ctx);

  fs::create_directories(dir);
  write_text(dir / "summary.json", out.summary.dump(2) + "\n");
  write_text(dir / "scenario.cfg", resolved_scenario_text(sc, ctx.device, to_yaml(out.params)));

  json m;
  m["artifact"] = "qlink";
  m["version"] = QLINK_VERSION;
  m["command"] = command;
  m["scenario"] = sc.name;
  m["experiment"] = sc.kind;
  m["source"] = fs::path(sc.source).filename().string();
  m["seed"] = sc.seed;
  m["point"] = sc.point_index;
  m["effective_seed"] = ctx.seed;
  m["parameters"] = out.params;
  m["device"] = device::dump_device(ctx.device);
  std::vector<std::string> files = out.files;
  files.insert(files.end(), {"summary.json", "scenario.cfg"});
  m["outputs"] = files;
  m["rerun"] = "qlink run scenario.cfg";
  write_text(dir / "manifest.json", m.dump(2) + "\n");
  return out;
}

Axis parse_axis(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("axis '" + spec + "': expected key=v1..v2:n");
  Axis a;
  a.spec = spec;
  a.key = spec.substr(0, eq);
  const std::string rhs = spec.substr(eq + 1);
  auto num = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty() || !std::isfinite(v)) {
      throw ConfigError("axis '" + spec + "': '" + s + "' is not a finite number");
    }
    return v;
  };
  const auto dots = rhs.find("..");
  if (dots == std::string::npos) {
    a.values.push_back(num(rhs));
    return a;
  }
  const auto colon = rhs.find(':', dots);
  if (colon == std::string::npos) throw ConfigError("axis '" + spec + "': missing ':n' point count");
  const double lo = num(rhs.substr(0, dots));
  const double hi = num(rhs.substr(dots + 2, colon - dots - 2));
  const double nd = num(rhs.substr(colon + 1));
  if (nd < 1 || nd != std::floor(nd) || nd > 1e9) throw ConfigError("axis '" + spec + "': point count must be a positive integer");
  const long n = static_cast<long>(nd);
  for (long i = 0; i < n; ++i) a.values.push_back(n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
  return a;
}

fs::path run_sweep(const Scenario& sc, const SweepOptions& opt, const fs::path& root) {
  std::vector<std::string> specs = sc.sweep_axes;
  specs.insert(specs.end(), opt.axes.begin(), opt.axes.end());
  if (specs.empty()) throw ConfigError("sweep needs at least one axis (--axis key=v1..v2:n)");
  std::vector<Axis> axes;
  double total = 1.0;
  for (const auto& s : specs) {
    axes.push_back(parse_axis(s));
    total *= static_cast<double>(axes.back().values.size());
  }
  const long cap = opt.cap > 0 ? opt.cap : sc.sweep_cap;
  if (total > static_cast<double>(cap)) {
    std::ostringstream msg;
    msg << "sweep grid has " << static_cast<long long>(total) << " points, above the cap of " << cap;
    throw ConfigError(msg.str());
  }
  const auto n = static_cast<std::size_t>(total);
  const std::uint64_t master = opt.seed_given ? opt.seed : sc.seed;
  const fs::path dir = scenario_output_dir(sc, root);
  fs::create_directories(dir);

  std::vector<Scenario> points(n, sc);
  std::vector<std::vector<double>> coords(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t rem = i;
    auto& p = points[i];
    p.params = YAML::Clone(sc.params);
    p.device = YAML::Clone(sc.device);
    p.seed = master;
    p.point_index = i;
    // Last axis varies fastest.
    coords[i].resize(axes.size());
    for (std::size_t k = axes.size(); k-- > 0;) {
      const auto& vals = axes[k].values;
      coords[i][k] = vals[rem % vals.size()];
      rem /= vals.size();
    }
    for (std::size_t k = 0; k < axes.size(); ++k) set_param(p.params, axes[k].key, coords[i][k]);
  }

  std::vector<RunOutput> results(n);
  char name[32];
  auto point_dir = [&](std::size_t i) {
    std::snprintf(name, sizeof name, "point_%04zu", i);
    return dir / name;
  };
  std::vector<fs::path> dirs;
  for (std::size_t i = 0; i < n; ++i) dirs.push_back(point_dir(i));
  parallel_for(n, opt.workers, [&](std::size_t i) { results[i] = run_scenario(points[i], dirs[i], 1, "sweep"); });

  std::vector<std::string> keys;
  std::vector<std::vector<std::pair<std::string, double>>> flat(n);
  for (std::size_t i = 0; i < n; ++i) {
    flatten(results[i].summary, "", flat[i]);
    for (const auto& [k, v] : flat[i]) {
      if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
    }
  }
  std::vector<std::string> header{"point", "seed"};
  for (const auto& a : axes) header.push_back(a.key);
  header.insert(header.end(), keys.begin(), keys.end());
  {
    CsvWriter w((dir / "sweep.csv").string(), header);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> row(coords[i]);
      for (const auto& k : keys) {
        double v = std::nan("");
        for (const auto& [fk, fv] : flat[i]) {
          if (fk == k) v = fv;
        }
        row.push_back(v);
      }
      w.row({std::to_string(i), std::to_string(derive_seed(master, i))}, row);
    }
  }

  const auto dev = resolve_device(sc);
  write_text(dir / "scenario.cfg", resolved_scenario_text(sc, dev, sc.params, specs));
  json m;
  m["artifact"] = "qlink";
  m["version"] = QLINK_VERSION;
  m["command"] = "sweep";
  m["scenario"] = sc.name;
  m["experiment"] = sc.kind;
  m["source"] = fs::path(sc.source).filename().string();
  m["seed"] = master;
  m["axes"] = specs;
  m["points"] = n;
  m["cap"] = cap;
  m["device"] = device::dump_device(dev);
  m["outputs"] = {"sweep.csv", "scenario.cfg"};
  m["rerun"] = "qlink sweep scenario.cfg --seed " + std::to_string(master);
  write_text(dir / "manifest.json", m.dump(2) + "\n");
  return dir;
}

const std::vector<Figure>& figures() {
  static const std::vector<Figure> table = {
      {"2a", {"fig2a.cfg"}, "Qubit-cable swap chevrons at 0.08 MHz coupling"},
      {"2b", {"fig2b.cfg"}, "Qubit-cable swap chevrons at 0.25 MHz coupling"},
      {"2c", {"fig2c.cfg"}, "Stripe regime at 0.45 MHz coupling"},
      {"2d", {"fig2d.cfg"}, "Strong coupling, 1.63 MHz: emission and the first revival stripe"},
      {"2e", {"fig2e.cfg"}, "Energy decay of a single cable mode"},
      {"2f", {"fig2f.cfg"}, "Ramsey decay of a single cable mode"},
      {"3a", {"fig3a.cfg"}, "Emission rate versus coupler flux bias"},
      {"3c", {"fig3c.cfg"}, "Shaped state transfer: populations, emitted fields and control waveforms"},
      {"3d", {"fig3d.cfg"}, "Process matrix of the state transfer"},
      {"3e", {"fig3e.cfg"}, "Half-photon emission: sender and receiver envelopes"},
      {"3f", {"fig3f.cfg"}, "Density matrix of the remote Bell state"},
      {"4b", {"fig4b.cfg"}, "State teleportation with feed-forward: process matrix per outcome"},
      {"4d", {"fig4d.cfg", "fig4d_noiseless.cfg"}, "CNOT teleportation process matrix, real and imaginary parts"},
      {"S3", {"figS3.cfg"}, "Active cooling of the cable mode"},
      {"S7", {"figS7.cfg"}, "Cross-check of the mode-ladder and input-output engines"},
      {"S8", {"figS8.cfg"}, "Transfer inefficiency versus receiver frequency mismatch"},
      {"S9", {"figS9.cfg"}, "Fractional-emission calibration: calibrated, under and over coupling"},
      {"S11", {"figS11.cfg"}, "Teleported single-qubit states, feed-forward and post-selected"},
      {"S12", {"figS12.cfg"}, "Post-selected teleportation process matrices"},
  };
  return table;
}

fs::path reproduce(const std::string& id, const fs::path& root, int workers) {
  const Figure* fig = nullptr;
  for (const auto& f : figures()) {
    if (f.id == id) fig = &f;
  }
  if (!fig) {
    std::string list;
    for (const auto& f : figures()) list += (list.empty() ? "" : ", ") + f.id;
    throw ConfigError("unknown figure '" + id + "' (supported: " + list + ")");
  }
  const fs::path dir = root / ("fig" + fig->id);
  std::ostringstream readme;
  readme << "# Figure " << fig->id << "\n\n"
         << fig->title << ". Plot-ready data for Fig. " << fig->id
         << " of the source paper, written by `qlink reproduce " << fig->id << "`.\n\n";
  for (const auto& file : fig->scenarios) {
    const Scenario sc = load_scenario((scenario_dir() / file).string());
    const fs::path sub = fig->scenarios.size() == 1 ? dir : dir / sc.name;
    const auto out = run_scenario(sc, sub, workers, "reproduce " + fig->id);
    readme << "## " << (fig->scenarios.size() == 1 ? "Files" : sc.name) << "\n\n"
           << "Scenario `" << file << "`, experiment `" << sc.kind << "`.\n\n";
    for (const auto& f : out.files) readme << "- " << f << "\n";
    readme << "- summary.json\n- scenario.cfg\n- manifest.json\n\n";
  }
  fs::create_directories(dir);
  write_text(dir / "README.md", readme.str());
  return dir;
}

}  // namespace qlink::cli
