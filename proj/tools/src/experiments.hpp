#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "scenario.hpp"

namespace qlink::cli {

struct RunContext {
  device::DeviceParams device;
  std::uint64_t seed = 0;  // already derived for this point
  int workers = 1;
  std::filesystem::path out_dir;
};

struct RunOutput {
  json summary = json::object();
  json params = json::object();  // resolved
  std::vector<std::string> files;
};

/// Reads and validates the params of `kind`, then runs it into ctx.out_dir.
/// Validation failures throw ConfigError before any output is written.
RunOutput run_experiment(const std::string& kind, Params& params, const RunContext& ctx);

}  // namespace qlink::cli
