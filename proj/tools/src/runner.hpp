#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "experiments.hpp"

namespace qlink::cli {

/// --out flag, else $QLINK_OUTPUT_DIR, else ./qlink_out.
std::filesystem::path output_root(const std::string& flag);
/// $QLINK_SCENARIO_DIR, else the bundled directory.
std::filesystem::path scenario_dir();

/// Runs one scenario into `dir` and writes summary.json, scenario.cfg and
/// manifest.json next to the experiment outputs.
RunOutput run_scenario(const Scenario& sc, const std::filesystem::path& dir, int workers,
                       const std::string& command);

/// Directory a plain `run` writes to.
std::filesystem::path scenario_output_dir(const Scenario& sc, const std::filesystem::path& root);

struct Axis {
  std::string key;
  std::vector<double> values;
  std::string spec;
};
/// "key=v1..v2:n" (n evenly spaced values, ends included) or "key=v".
Axis parse_axis(const std::string& spec);

struct SweepOptions {
  std::vector<std::string> axes;  // appended to the scenario's own axes
  int workers = 1;
  std::uint64_t seed = 0;
  bool seed_given = false;
  long cap = 0;  // 0: the scenario's cap
};

/// Grid over all axes, point i seeded from (master seed, i); writes one
/// directory per point and sweep.csv with one row per point in index order.
std::filesystem::path run_sweep(const Scenario& sc, const SweepOptions& opt, const std::filesystem::path& root);

struct Figure {
  std::string id;
  std::vector<std::string> scenarios;
  std::string title;
};
const std::vector<Figure>& figures();
std::filesystem::path reproduce(const std::string& id, const std::filesystem::path& root, int workers);

}  // namespace qlink::cli
