#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qlink/error.hpp"
#include "runner.hpp"

using namespace qlink;
using namespace qlink::cli;

namespace {

enum Exit { kOk = 0, kValidation = 1, kRuntime = 2 };

void print_summary(const json& s) { std::cout << s.dump(2) << "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qlink: two-node superconducting quantum link simulator"};
  app.require_subcommand(1);
  std::string out_flag;
  app.add_option("-o,--out", out_flag, "Output root (default $QLINK_OUTPUT_DIR or ./qlink_out)");

  std::string config;
  int workers = 1;
  auto* run = app.add_subcommand("run", "Run one scenario file");
  run->add_option("config", config, "Scenario file")->required();
  run->add_option("-w,--workers", workers, "Threads inside the experiment")->check(CLI::PositiveNumber);

  std::string figure;
  auto* repro = app.add_subcommand("reproduce", "Run the bundled scenario of a figure");
  repro->add_option("figure", figure, "Figure id, e.g. 3f or S9");
  repro->add_option("-w,--workers", workers, "Threads inside the experiment")->check(CLI::PositiveNumber);
  bool list = false;
  repro->add_flag("--list", list, "List supported figure ids");

  SweepOptions sw;
  auto* sweep = app.add_subcommand("sweep", "Grid sweep over scenario parameters");
  sweep->add_option("config", config, "Scenario file")->required();
  sweep->add_option("--axis", sw.axes, "key=v1..v2:n, dotted keys reach nested params");
  sweep->add_option("-w,--workers", sw.workers, "Grid points run concurrently")->check(CLI::PositiveNumber);
  auto* seed_opt = sweep->add_option("--seed", sw.seed, "Master seed");
  sweep->add_option("--max-points", sw.cap, "Refuse grids larger than this")->check(CLI::PositiveNumber);

  std::string device_path;
  auto* budget = app.add_subcommand("budget", "Transfer inefficiency budget of a device");
  budget->add_option("device", device_path, "Device file, or 'default'")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kValidation;
  }

  const auto root = output_root(out_flag);
  try {
    if (*run) {
      const Scenario sc = load_scenario(config);
      const auto dir = scenario_output_dir(sc, root);
      print_summary(run_scenario(sc, dir, workers, "run").summary);
      std::cerr << "wrote " << dir.string() << "\n";
    } else if (*repro) {
      if (list) {
        for (const auto& f : figures()) std::cout << f.id << "\t" << f.title << "\n";
        return kOk;
      }
      if (figure.empty()) throw ConfigError("reproduce needs a figure id (see --list)");
      const auto dir = reproduce(figure, root, workers);
      std::cerr << "wrote " << dir.string() << "\n";
    } else if (*sweep) {
      const Scenario sc = load_scenario(config);
      sw.seed_given = seed_opt->count() > 0;
      const auto dir = run_sweep(sc, sw, root);
      std::cerr << "wrote " << dir.string() << "\n";
    } else if (*budget) {
      Scenario sc;
      sc.name = "budget";
      sc.kind = "budget";
      sc.device = YAML::Node(device_path);
      sc.params = YAML::Node(YAML::NodeType::Map);
      sc.source = device_path;
      const auto dir = root / "budget";
      const auto out = run_scenario(sc, dir, 1, "budget");
      for (const auto& [k, v] : out.summary.items()) std::printf("%-28s %6.2f%%\n", k.c_str(), 100 * v.get<double>());
      std::cerr << "wrote " << dir.string() << "\n";
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const InvalidParameter& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return kRuntime;
  }
  return kOk;
}
