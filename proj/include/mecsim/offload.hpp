#ifndef MECSIM_OFFLOAD_HPP_
#define MECSIM_OFFLOAD_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mecsim/dnn.hpp"
#include "mecsim/types.hpp"

namespace mecsim {

// Result of one offloading optimization. The allocation always satisfies
// every constraint (validate() returns no violations).
struct SolveReport {
  Allocation allocation;
  double total_cost = 0.0;
  int iterations = 0;               // solve_edge probes performed
  std::vector<int> moves;           // device ids moved edge -> local, in order
  std::vector<double> cost_trace;   // total cost after each committed move
  std::string method;               // greedy | enumeration | local-all | edge-all | random
};

struct GreedyOptions {
  // After a rejected move, keep probing the remaining devices in descending
  // cost-difference order instead of stopping at the first rejection.
  bool extended = false;
};

// Iterative greedy offloading: start with every device offloaded, repeatedly
// move the device with the largest F1-F0 gap to local execution while the
// total cost strictly decreases, stop at the first rejected move.
SolveReport greedy_offload(std::span<const DeviceProfile> devices,
                           const SystemConfig& cfg, const Models& models,
                           std::span<const double> rates_bps,
                           const GreedyOptions& opts = {});

// Exhaustive search over all 2^N offloading vectors; exact optimum. Ties are
// broken toward fewer offloaded devices, then the lexicographically smallest
// id set. Throws std::invalid_argument when N exceeds max_devices.
SolveReport enumerate_offload(std::span<const DeviceProfile> devices,
                              const SystemConfig& cfg, const Models& models,
                              std::span<const double> rates_bps,
                              int max_devices = 14);

enum class BaselineKind { LocalAll, EdgeAll, Random };

struct RandomPolicy {
  double offload_prob = 0.5;
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;  // extra stream key so trials draw independently
};

// Reference schemes: everything local, everything offloaded, or each device
// offloaded independently with probability p. Subproblems are still solved in
// closed form.
SolveReport baseline(std::span<const DeviceProfile> devices,
                     const SystemConfig& cfg, const Models& models,
                     std::span<const double> rates_bps, BaselineKind kind,
                     const RandomPolicy& random = {});

}  // namespace mecsim

#endif  // MECSIM_OFFLOAD_HPP_
