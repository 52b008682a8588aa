#pragma once

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "json.hpp"
#include "qlink/device/device_params.hpp"

namespace qlink::cli {

using json = nlohmann::ordered_json;

const std::vector<std::string>& experiment_kinds();

struct Scenario {
  std::string name;
  std::string kind;
  YAML::Node device;  // "default", a path, or an inline device mapping
  std::uint64_t seed = 0;
  std::uint64_t point_index = 0;
  std::string output;  // empty: the scenario name
  YAML::Node params;
  std::vector<std::string> sweep_axes;
  int sweep_workers = 1;
  long sweep_cap = 10000;
  std::string source;
  std::filesystem::path base_dir;
};

Scenario parse_scenario(const std::string& text, const std::string& source,
                        const std::filesystem::path& base_dir);
Scenario load_scenario(const std::string& path);

device::DeviceParams resolve_device(const Scenario& sc);

/// Reader over the params mapping. Every key read is recorded with its
/// resolved value; finish() rejects keys nobody asked for.
class Params {
 public:
  Params(YAML::Node node, std::string source);

  double number(const std::string& key, double fallback);
  int integer(const std::string& key, int fallback);
  bool flag(const std::string& key, bool fallback);
  std::string choice(const std::string& key, const std::string& fallback,
                     std::initializer_list<std::string_view> allowed);
  std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback);
  Params& section(const std::string& key);

  void finish() const;
  json resolved() const;

 private:
  YAML::Node node_;
  std::string source_;
  std::vector<std::string> used_;
  json values_ = json::object();
  std::map<std::string, std::unique_ptr<Params>> sections_;
};

/// Sets params[a][b]... = value for the dotted key "a.b...".
void set_param(YAML::Node& params, const std::string& dotted_key, double value);

/// Resolved scenario in the input format, runnable on its own.
std::string resolved_scenario_text(const Scenario& sc, const device::DeviceParams& dev,
                                   const YAML::Node& params, const std::vector<std::string>& axes = {});

YAML::Node to_yaml(const json& j);

}  // namespace qlink::cli
