#ifndef MECSIM_EXPERIMENT_HPP_
#define MECSIM_EXPERIMENT_HPP_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mecsim/config.hpp"
#include "mecsim/offload.hpp"

namespace mecsim {

// One generated deployment: devices dropped uniformly in the square, base
// station at the center. Deterministic given (config seed, trial).
struct Scenario {
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;
  std::vector<DeviceProfile> devices;
};

enum class Method { Greedy, Enumeration, LocalAll, EdgeAll, Random };

// Canonical names: greedy, enumeration, local-all, edge-all, random.
// Parsing also accepts the short aliases enum, local, and edge.
const char* method_name(Method m);
Method method_from_name(const std::string& name);

Scenario generate_scenario(const Config& cfg, std::uint64_t trial);
Scenario generate_scenario(const Config& cfg, std::uint64_t trial,
                           int n_devices);

// Uplink rate of every device in the scenario, in device order.
std::vector<double> scenario_rates(const Config& cfg, const Scenario& sc);

// Runs one method on one scenario.
SolveReport solve_scenario(const Config& cfg, const Scenario& sc,
                           std::span<const double> rates, Method method);

struct TrialResult {
  std::uint64_t trial = 0;
  Method method = Method::Greedy;
  int n_devices = 0;
  double total_cost = 0.0;
  double avg_cost = 0.0;        // per device
  double avg_delay_s = 0.0;
  double avg_energy_j = 0.0;
  double offloading_rate = 0.0;
};

struct MethodAggregate {
  Method method = Method::Greedy;
  int trials = 0;
  double avg_cost = 0.0;        // means of the per-trial values
  double avg_delay_s = 0.0;
  double avg_energy_j = 0.0;
  double offloading_rate = 0.0;
  double wall_time_s = 0.0;     // informational; never serialized
};

struct ExperimentResult {
  std::vector<TrialResult> trials;       // trial-major, then method order
  std::vector<MethodAggregate> aggregates;
};

// Monte-Carlo loop: n_trials scenarios, each solved by every method. Trials
// run in parallel; results are merged by trial index, so the output does not
// depend on the thread count.
ExperimentResult run_trials(const Config& cfg, int n_trials,
                            std::span<const Method> methods);

enum class SweepAxis { DeviceCount, Bandwidth, EdgeCompute, Beta };

const char* sweep_axis_name(SweepAxis axis);
SweepAxis sweep_axis_from_name(const std::string& name);

// Returns a copy of the config with one swept parameter replaced. Beta sets
// beta1 = value and beta2 = 1 - value.
Config apply_axis(const Config& cfg, SweepAxis axis, double value);

struct SweepResult {
  SweepAxis axis = SweepAxis::DeviceCount;
  std::vector<double> values;
  std::vector<ExperimentResult> results;  // aligned with values
};

SweepResult sweep(const Config& cfg, SweepAxis axis,
                  std::span<const double> values,
                  std::span<const Method> methods);

// CSV emission. Locale-independent (shortest round-trip number format,
// '.' decimal point, LF line endings, fixed column order).
std::string format_double(double value);
void write_aggregate_csv(std::ostream& out, const SweepResult& sweep);
void write_trials_csv(std::ostream& out, const SweepResult& sweep);
void write_allocation_csv(std::ostream& out, const Config& cfg,
                          const Scenario& sc, std::span<const double> rates,
                          const SolveReport& report);

}  // namespace mecsim

#endif  // MECSIM_EXPERIMENT_HPP_
