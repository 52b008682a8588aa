#include "scenario.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "qlink/error.hpp"
#include "qlink/util/csv.hpp"
#include "qlink/util/yaml_fields.hpp"

namespace qlink::cli {

const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> kinds = {
      "chevron",  "mode-coherence", "transfer", "mismatch-scan", "emission-scan",
      "calibrate", "entangle",      "teleport", "teleport-cnot", "cooling",
      "budget",   "tomography",     "crosscheck"};
  return kinds;
}

namespace {

std::uint64_t unsigned_field(const YAML::Node& map, const std::string& key, std::uint64_t fallback,
                             const std::string& source) {
  const YAML::Node v = map[key];
  if (!v) return fallback;
  try {
    const auto s = v.Scalar();
    if (!v.IsScalar() || s.empty() || s[0] == '-') throw YAML::Exception(v.Mark(), "");
    return v.as<std::uint64_t>();
  } catch (const YAML::Exception&) {
    yaml::fail(v, source, "'" + key + "' must be a non-negative integer");
  }
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& source,
                        const std::filesystem::path& base_dir) {
  const YAML::Node root = yaml::parse(text, source);
  if (!root.IsMap()) throw ConfigError(source + ": scenario must be a mapping");
  yaml::check_keys(root, source,
                   {"name", "experiment", "device", "seed", "point", "output", "params", "sweep"});

  Scenario sc;
  sc.source = source;
  sc.base_dir = base_dir;
  sc.name = yaml::string(root, "name", source);
  if (sc.name.empty() || sc.name.find_first_of("/\\") != std::string::npos) {
    yaml::fail(root["name"], source, "'name' must be a non-empty plain name");
  }
  sc.kind = yaml::string(root, "experiment", source);
  const auto& kinds = experiment_kinds();
  if (std::find(kinds.begin(), kinds.end(), sc.kind) == kinds.end()) {
    std::string list;
    for (const auto& k : kinds) list += (list.empty() ? "" : ", ") + k;
    yaml::fail(root["experiment"], source,
               "unknown experiment '" + sc.kind + "' (expected one of: " + list + ")");
  }
  sc.device = root["device"] ? root["device"] : YAML::Node("default");
  if (!sc.device.IsScalar() && !sc.device.IsMap()) {
    yaml::fail(root["device"], source, "'device' must be 'default', a file path or a mapping");
  }
  sc.seed = unsigned_field(root, "seed", 0, source);
  sc.point_index = unsigned_field(root, "point", 0, source);
  sc.output = yaml::string_or(root, "output", "", source);
  sc.params = root["params"] ? root["params"] : YAML::Node(YAML::NodeType::Map);
  if (!sc.params.IsMap()) yaml::fail(root["params"], source, "'params' must be a mapping");

  if (const YAML::Node sw = root["sweep"]) {
    yaml::check_keys(sw, source, {"axes", "workers", "cap"});
    if (const YAML::Node axes = sw["axes"]) {
      if (!axes.IsSequence()) yaml::fail(axes, source, "'axes' must be a list of k=v1..v2:n strings");
      for (const auto& a : axes) {
        if (!a.IsScalar()) yaml::fail(a, source, "axis must be a string");
        sc.sweep_axes.push_back(a.Scalar());
      }
    }
    sc.sweep_workers = yaml::integer_or(sw, "workers", 1, source);
    sc.sweep_cap = yaml::integer_or(sw, "cap", 10000, source);
    if (sc.sweep_cap < 1) yaml::fail(sw["cap"], source, "'cap' must be positive");
  }
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open scenario file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path, std::filesystem::path(path).parent_path());
}

device::DeviceParams resolve_device(const Scenario& sc) {
  if (sc.device.IsMap()) {
    YAML::Emitter e;
    e << sc.device;
    return device::parse_device(e.c_str(), sc.source + " (device)");
  }
  const std::string ref = sc.device.Scalar();
  if (ref == "default") return device::DeviceParams::defaults();
  std::filesystem::path p(ref);
  if (p.is_relative()) p = sc.base_dir / p;
  return device::load_device(p.string());
}

Params::Params(YAML::Node node, std::string source) : node_(std::move(node)), source_(std::move(source)) {
  if (!node_ || node_.IsNull()) node_ = YAML::Node(YAML::NodeType::Map);
  if (!node_.IsMap()) yaml::fail(node_, source_, "expected a mapping of parameters");
}

double Params::number(const std::string& key, double fallback) {
  const double v = yaml::number_or(node_, key, fallback, source_);
  used_.push_back(key);
  values_[key] = v;
  return v;
}

int Params::integer(const std::string& key, int fallback) {
  const int v = yaml::integer_or(node_, key, fallback, source_);
  used_.push_back(key);
  values_[key] = v;
  return v;
}

bool Params::flag(const std::string& key, bool fallback) {
  const bool v = yaml::boolean_or(node_, key, fallback, source_);
  used_.push_back(key);
  values_[key] = v;
  return v;
}

std::string Params::choice(const std::string& key, const std::string& fallback,
                           std::initializer_list<std::string_view> allowed) {
  const std::string v = yaml::string_or(node_, key, fallback, source_);
  if (std::find(allowed.begin(), allowed.end(), v) == allowed.end()) {
    std::string list;
    for (auto a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
    const YAML::Node at = node_[key];
    yaml::fail(at ? at : node_, source_, "'" + key + "' must be one of: " + list);
  }
  used_.push_back(key);
  values_[key] = v;
  return v;
}

std::vector<double> Params::numbers(const std::string& key, const std::vector<double>& fallback) {
  std::vector<double> out = fallback;
  const YAML::Node v = node_[key];
  if (v) {
    if (!v.IsSequence() || v.size() == 0) yaml::fail(v, source_, "'" + key + "' must be a non-empty list");
    out.clear();
    for (std::size_t i = 0; i < v.size(); ++i) {
      YAML::Node wrap(YAML::NodeType::Map);
      wrap[key] = v[i];
      out.push_back(yaml::number(wrap, key, source_));
    }
  }
  used_.push_back(key);
  values_[key] = out;
  return out;
}

Params& Params::section(const std::string& key) {
  auto it = sections_.find(key);
  if (it != sections_.end()) return *it->second;
  const YAML::Node v = node_[key];
  if (v && !v.IsMap()) yaml::fail(v, source_, "'" + key + "' must be a mapping");
  used_.push_back(key);
  values_[key] = json::object();
  auto child = std::make_unique<Params>(v ? v : YAML::Node(YAML::NodeType::Map), source_);
  return *sections_.emplace(key, std::move(child)).first->second;
}

void Params::finish() const {
  for (const auto& kv : node_) {
    const auto key = kv.first.as<std::string>();
    if (std::find(used_.begin(), used_.end(), key) == used_.end()) {
      std::string list;
      for (const auto& u : used_) list += (list.empty() ? "" : ", ") + u;
      yaml::fail(kv.first, source_, "unknown parameter '" + key + "' (accepted: " + list + ")");
    }
  }
  for (const auto& [k, s] : sections_) s->finish();
}

json Params::resolved() const {
  json out = values_;
  for (const auto& [k, s] : sections_) out[k] = s->resolved();
  return out;
}

void set_param(YAML::Node& params, const std::string& dotted_key, double value) {
  std::vector<std::string> parts;
  std::stringstream ss(dotted_key);
  for (std::string p; std::getline(ss, p, '.');) {
    if (p.empty()) throw ConfigError("axis key '" + dotted_key + "' has an empty component");
    parts.push_back(p);
  }
  if (parts.empty()) throw ConfigError("empty axis key");
  YAML::Node node = params;
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    YAML::Node next = node[parts[i]];
    if (!next || next.IsNull()) {
      node[parts[i]] = YAML::Node(YAML::NodeType::Map);
      next = node[parts[i]];
    }
    if (!next.IsMap()) throw ConfigError("axis key '" + dotted_key + "': '" + parts[i] + "' is not a section");
    node.reset(next);
  }
  node[parts.back()] = format_double(value);
}

YAML::Node to_yaml(const json& j) {
  if (j.is_object()) {
    YAML::Node n(YAML::NodeType::Map);
    for (const auto& [k, v] : j.items()) n[k] = to_yaml(v);
    return n;
  }
  if (j.is_array()) {
    YAML::Node n(YAML::NodeType::Sequence);
    for (const auto& v : j) n.push_back(to_yaml(v));
    return n;
  }
  if (j.is_boolean()) return YAML::Node(j.get<bool>());
  if (j.is_number_integer()) return YAML::Node(j.get<long long>());
  if (j.is_number()) return YAML::Node(format_double(j.get<double>()));
  if (j.is_string()) return YAML::Node(j.get<std::string>());
  return YAML::Node();
}

std::string resolved_scenario_text(const Scenario& sc, const device::DeviceParams& dev,
                                   const YAML::Node& params, const std::vector<std::string>& axes) {
  YAML::Node root(YAML::NodeType::Map);
  root["name"] = sc.name;
  root["experiment"] = sc.kind;
  root["seed"] = sc.seed;
  root["point"] = sc.point_index;
  root["device"] = YAML::Load(device::dump_device(dev));
  root["params"] = params;
  if (!axes.empty()) {
    YAML::Node sw(YAML::NodeType::Map);
    for (const auto& a : axes) sw["axes"].push_back(a);
    root["sweep"] = sw;
  }
  YAML::Emitter e;
  e << root;
  return std::string(e.c_str()) + "\n";
}

}  // namespace qlink::cli
