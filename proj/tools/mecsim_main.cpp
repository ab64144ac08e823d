// Command-line front end: scenario solving, parameter sweeps, and config
// validation. All result data goes to stdout (or files) in deterministic
// CSV form; progress and timing go to stderr.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mecsim/experiment.hpp"

namespace {

// Exit codes: 0 success, 1 unexpected error, 2 file I/O, 3 bad config,
// 4 unattainable accuracy requirement, 5 bad command line.
constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitIo = 2;
constexpr int kExitConfig = 3;
constexpr int kExitInfeasible = 4;
constexpr int kExitUsage = 5;

mecsim::Config resolve_config(const std::string& cli_path) {
  std::string path = cli_path;
  if (path.empty()) {
    if (const char* env = std::getenv("MECSIM_CONFIG")) {
      path = env;
    }
  }
  if (path.empty()) {
    mecsim::Config cfg = mecsim::Config::defaults();
    mecsim::validate_config(cfg);
    return cfg;
  }
  return mecsim::load_config(path);
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open output file: " + path);
  }
  out << text;
  out.flush();
  if (!out) {
    throw std::runtime_error("write failure: " + path);
  }
}

struct SolveArgs {
  std::string config_path;
  std::string method = "greedy";
  std::string out = "-";
  int devices = -1;
  long long trial = 0;
  long long seed = -1;
};

int cmd_solve(const SolveArgs& args) {
  mecsim::Config cfg = resolve_config(args.config_path);
  if (args.devices >= 0) cfg.experiment.n_devices = args.devices;
  if (args.seed >= 0) cfg.experiment.seed = static_cast<std::uint64_t>(args.seed);
  if (args.trial < 0) {
    throw std::invalid_argument("--trial must be nonnegative");
  }
  mecsim::Method method = mecsim::method_from_name(args.method);

  mecsim::Scenario sc =
      mecsim::generate_scenario(cfg, static_cast<std::uint64_t>(args.trial));
  std::vector<double> rates = mecsim::scenario_rates(cfg, sc);

  auto t0 = std::chrono::steady_clock::now();
  mecsim::SolveReport report = mecsim::solve_scenario(cfg, sc, rates, method);
  auto t1 = std::chrono::steady_clock::now();

  std::ostringstream csv;
  mecsim::write_allocation_csv(csv, cfg, sc, rates, report);
  write_text(args.out, csv.str());

  int offloaded = 0;
  for (const mecsim::AllocationEntry& e : report.allocation) {
    offloaded += e.offload ? 1 : 0;
  }
  std::cerr << "method=" << report.method << " devices=" << sc.devices.size()
            << " offloaded=" << offloaded
            << " total_cost=" << mecsim::format_double(report.total_cost)
            << " iterations=" << report.iterations << " solve_time_s="
            << std::chrono::duration<double>(t1 - t0).count() << '\n';
  return kExitOk;
}

struct SweepArgs {
  std::string config_path;
  std::string axis;
  std::string out_dir = ".";
  std::vector<double> values;
  std::vector<std::string> methods = {"greedy", "local-all", "edge-all",
                                      "random"};
  int devices = -1;
  int trials = -1;
  int threads = -1;
  long long seed = -1;
  bool per_trial = false;
};

int cmd_sweep(const SweepArgs& args) {
  mecsim::Config cfg = resolve_config(args.config_path);
  if (args.devices >= 0) cfg.experiment.n_devices = args.devices;
  if (args.trials >= 0) cfg.experiment.trials = args.trials;
  if (args.threads >= 0) cfg.experiment.threads = args.threads;
  if (args.seed >= 0) cfg.experiment.seed = static_cast<std::uint64_t>(args.seed);

  mecsim::SweepAxis axis = mecsim::sweep_axis_from_name(args.axis);
  std::vector<mecsim::Method> methods;
  methods.reserve(args.methods.size());
  for (const std::string& name : args.methods) {
    methods.push_back(mecsim::method_from_name(name));
  }
  if (methods.empty()) {
    throw std::invalid_argument("--methods must name at least one method");
  }
  if (args.values.empty()) {
    throw std::invalid_argument("--values must list at least one point");
  }

  auto t0 = std::chrono::steady_clock::now();
  mecsim::SweepResult result = mecsim::sweep(cfg, axis, args.values, methods);
  auto t1 = std::chrono::steady_clock::now();

  std::filesystem::path dir(args.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create output directory: " +
                             args.out_dir + ": " + ec.message());
  }
  const std::string axis_name = mecsim::sweep_axis_name(axis);

  std::ostringstream agg;
  mecsim::write_aggregate_csv(agg, result);
  std::string agg_path = (dir / ("sweep_" + axis_name + ".csv")).string();
  write_text(agg_path, agg.str());
  std::cerr << "wrote " << agg_path << '\n';

  if (args.per_trial) {
    std::ostringstream tri;
    mecsim::write_trials_csv(tri, result);
    std::string tri_path = (dir / ("trials_" + axis_name + ".csv")).string();
    write_text(tri_path, tri.str());
    std::cerr << "wrote " << tri_path << '\n';
  }
  std::cerr << "sweep_time_s=" << std::chrono::duration<double>(t1 - t0).count()
            << '\n';
  return kExitOk;
}

int cmd_validate(const std::string& config_path) {
  mecsim::Config cfg = resolve_config(config_path);
  int m_star = mecsim::min_frames(cfg.models.accuracy, cfg.device.accuracy_req,
                                  cfg.device.m_max);
  std::cout << "ok\n";
  std::cout << "min_frames=" << m_star << '\n';
  std::cout << "macs_at_min_frames="
            << mecsim::format_double(cfg.models.complexity.macs(m_star))
            << '\n';
  std::cout << "frame_bits=" << mecsim::format_double(cfg.device.frame_bits())
            << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "mecsim: joint offloading, uplink-time, and CPU allocation for "
      "multi-device video inference at the network edge"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("-c,--config", config_path,
                 "Config JSON file (default: $MECSIM_CONFIG, else built-in "
                 "defaults)");

  SolveArgs solve_args;
  CLI::App* solve = app.add_subcommand(
      "solve", "Solve one generated scenario and print the allocation CSV");
  solve->fallthrough();  // lets --config appear after the subcommand
  solve->add_option("--method", solve_args.method,
                    "greedy | enumeration | local-all | edge-all | random");
  solve->add_option("--devices", solve_args.devices, "Override device count");
  solve->add_option("--trial", solve_args.trial, "Scenario index");
  solve->add_option("--seed", solve_args.seed, "Override RNG seed");
  solve->add_option("-o,--out", solve_args.out, "Output file, - for stdout");

  SweepArgs sweep_args;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "Run a parameter sweep and write aggregate CSV files");
  sweep->fallthrough();
  sweep->add_option("--axis", sweep_args.axis,
                    "devices | bandwidth | edge-compute | beta")
      ->required();
  sweep->add_option("--values", sweep_args.values, "Sweep points")
      ->required()
      ->delimiter(',');
  sweep->add_option("--methods", sweep_args.methods, "Methods to compare")
      ->delimiter(',');
  sweep->add_option("--devices", sweep_args.devices, "Override device count");
  sweep->add_option("--trials", sweep_args.trials, "Override trial count");
  sweep->add_option("--threads", sweep_args.threads,
                    "Worker threads (0 = one per hardware thread)");
  sweep->add_option("--seed", sweep_args.seed, "Override RNG seed");
  sweep->add_option("--out-dir", sweep_args.out_dir, "Output directory");
  sweep->add_flag("--per-trial", sweep_args.per_trial,
                  "Also write the per-trial CSV");

  CLI::App* validate = app.add_subcommand(
      "validate", "Check the config and print derived model quantities");
  validate->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (solve->parsed()) {
      solve_args.config_path = config_path;
      return cmd_solve(solve_args);
    }
    if (sweep->parsed()) {
      sweep_args.config_path = config_path;
      return cmd_sweep(sweep_args);
    }
    if (validate->parsed()) {
      return cmd_validate(config_path);
    }
    std::cerr << "error: no subcommand\n";
    return kExitUsage;
  } catch (const mecsim::InfeasibleAccuracyError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const mecsim::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const mecsim::InfeasibleAllocationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
}
