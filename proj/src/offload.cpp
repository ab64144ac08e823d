#include "mecsim/offload.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mecsim/rng.hpp"
#include "mecsim/solver_edge.hpp"
#include "mecsim/solver_local.hpp"

namespace mecsim {

namespace {

// Per-device quantities that never change while the offloading set moves:
// the minimum frame count, its MAC cost, and the closed-form local optimum.
struct Instance {
  std::vector<int> m_star;
  std::vector<double> c_star;
  std::vector<LocalSolution> local;
  std::vector<EdgeTask> edge_tasks;  // one per device, aligned by index
};

Instance prepare(std::span<const DeviceProfile> devices,
                 const SystemConfig& cfg, const Models& models,
                 std::span<const double> rates_bps) {
  if (rates_bps.size() != devices.size()) {
    throw std::invalid_argument("offload: rates must cover every device");
  }
  Instance inst;
  inst.m_star.reserve(devices.size());
  inst.c_star.reserve(devices.size());
  inst.local.reserve(devices.size());
  inst.edge_tasks.reserve(devices.size());
  for (std::size_t i = 0; i < devices.size(); ++i) {
    const DeviceProfile& dev = devices[i];
    int m = min_frames(models.accuracy, dev.accuracy_req, dev.m_max);
    double c = models.complexity.macs(m);
    inst.m_star.push_back(m);
    inst.c_star.push_back(c);
    inst.local.push_back(solve_local(dev, cfg, c));
    inst.edge_tasks.push_back(EdgeTask{dev.id, c, m, dev.frame_bits,
                                       dev.tx_power_w, rates_bps[i]});
  }
  return inst;
}

std::vector<EdgeTask> gather_tasks(const Instance& inst,
                                   const std::vector<std::size_t>& offloaded) {
  std::vector<EdgeTask> tasks;
  tasks.reserve(offloaded.size());
  for (std::size_t i : offloaded) {
    tasks.push_back(inst.edge_tasks[i]);
  }
  return tasks;
}

Allocation build_allocation(std::span<const DeviceProfile> devices,
                            const Instance& inst,
                            const std::vector<std::size_t>& offloaded,
                            const EdgeSolution& edge) {
  Allocation alloc(devices.size());
  for (std::size_t i = 0; i < devices.size(); ++i) {
    alloc[i].offload = false;
    alloc[i].frames = inst.m_star[i];
    alloc[i].f_local_hz = inst.local[i].f_local_hz;
  }
  for (std::size_t k = 0; k < offloaded.size(); ++k) {
    std::size_t i = offloaded[k];
    alloc[i].offload = true;
    alloc[i].f_local_hz = 0.0;
    alloc[i].f_edge_hz = edge.f_edge_hz[k];
    alloc[i].time_share = edge.time_share[k];
  }
  return alloc;
}

double local_cost_sum(const Instance& inst,
                      const std::vector<bool>& offloaded_mask) {
  double sum = 0.0;
  for (std::size_t i = 0; i < offloaded_mask.size(); ++i) {
    if (!offloaded_mask[i]) {
      sum += inst.local[i].cost;
    }
  }
  return sum;
}

}  // namespace

SolveReport greedy_offload(std::span<const DeviceProfile> devices,
                           const SystemConfig& cfg, const Models& models,
                           std::span<const double> rates_bps,
                           const GreedyOptions& opts) {
  Instance inst = prepare(devices, cfg, models, rates_bps);
  std::size_t n = devices.size();

  std::vector<std::size_t> offloaded(n);
  for (std::size_t i = 0; i < n; ++i) offloaded[i] = i;
  std::vector<bool> is_offloaded(n, true);

  SolveReport report;
  report.method = opts.extended ? "greedy-extended" : "greedy";

  EdgeSolution edge = solve_edge(gather_tasks(inst, offloaded), cfg);
  double total = edge.total_cost;  // no local devices yet

  while (!offloaded.empty()) {
    // Rank current edge devices by how much worse they fare there.
    std::vector<std::size_t> order(offloaded.size());
    for (std::size_t k = 0; k < offloaded.size(); ++k) order[k] = k;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       double da = edge.device_cost[a] - inst.local[offloaded[a]].cost;
                       double db = edge.device_cost[b] - inst.local[offloaded[b]].cost;
                       if (da != db) return da > db;
                       return devices[offloaded[a]].id < devices[offloaded[b]].id;
                     });

    bool committed = false;
    std::size_t probe_limit = opts.extended ? order.size() : 1;
    for (std::size_t rank = 0; rank < probe_limit; ++rank) {
      std::size_t pos = order[rank];
      std::size_t candidate = offloaded[pos];

      std::vector<std::size_t> rest = offloaded;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(pos));
      EdgeSolution rest_edge = solve_edge(gather_tasks(inst, rest), cfg);
      ++report.iterations;

      std::vector<bool> rest_mask = is_offloaded;
      rest_mask[candidate] = false;
      double rest_total = rest_edge.total_cost + local_cost_sum(inst, rest_mask);

      if (rest_total < total) {
        offloaded = std::move(rest);
        is_offloaded = std::move(rest_mask);
        edge = std::move(rest_edge);
        total = rest_total;
        report.moves.push_back(devices[candidate].id);
        report.cost_trace.push_back(total);
        committed = true;
        break;
      }
    }
    if (!committed) {
      break;  // first rejected move ends the search
    }
  }

  report.allocation = build_allocation(devices, inst, offloaded, edge);
  report.total_cost = edge.total_cost + local_cost_sum(inst, is_offloaded);
  return report;
}

SolveReport enumerate_offload(std::span<const DeviceProfile> devices,
                              const SystemConfig& cfg, const Models& models,
                              std::span<const double> rates_bps,
                              int max_devices) {
  std::size_t n = devices.size();
  if (n > static_cast<std::size_t>(max_devices)) {
    throw std::invalid_argument(
        "enumerate_offload: " + std::to_string(n) + " devices exceed the cap of " +
        std::to_string(max_devices) + " (2^N subsets)");
  }
  Instance inst = prepare(devices, cfg, models, rates_bps);

  SolveReport report;
  report.method = "enumeration";
  if (n == 0) {
    return report;
  }

  double best_cost = std::numeric_limits<double>::infinity();
  std::uint64_t best_mask = 0;
  std::vector<int> best_ids;

  std::vector<std::size_t> subset;
  std::vector<int> subset_ids;
  for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
    subset.clear();
    subset_ids.clear();
    double local_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1ULL << i)) {
        subset.push_back(i);
        subset_ids.push_back(devices[i].id);
      } else {
        local_sum += inst.local[i].cost;
      }
    }
    double cost = solve_edge(gather_tasks(inst, subset), cfg).total_cost + local_sum;
    ++report.iterations;

    bool better = cost < best_cost;
    if (cost == best_cost) {
      // Prefer fewer offloaded devices, then the lexicographically
      // smallest id set.
      if (subset_ids.size() < best_ids.size()) {
        better = true;
      } else if (subset_ids.size() == best_ids.size() && subset_ids < best_ids) {
        better = true;
      }
    }
    if (better) {
      best_cost = cost;
      best_mask = mask;
      best_ids = subset_ids;
    }
  }

  subset.clear();
  for (std::size_t i = 0; i < n; ++i) {
    if (best_mask & (1ULL << i)) {
      subset.push_back(i);
    }
  }
  EdgeSolution edge = solve_edge(gather_tasks(inst, subset), cfg);
  report.allocation = build_allocation(devices, inst, subset, edge);
  report.total_cost = best_cost;
  return report;
}

SolveReport baseline(std::span<const DeviceProfile> devices,
                     const SystemConfig& cfg, const Models& models,
                     std::span<const double> rates_bps, BaselineKind kind,
                     const RandomPolicy& random) {
  Instance inst = prepare(devices, cfg, models, rates_bps);
  std::size_t n = devices.size();

  SolveReport report;
  std::vector<std::size_t> offloaded;
  switch (kind) {
    case BaselineKind::LocalAll:
      report.method = "local-all";
      break;
    case BaselineKind::EdgeAll:
      report.method = "edge-all";
      for (std::size_t i = 0; i < n; ++i) offloaded.push_back(i);
      break;
    case BaselineKind::Random: {
      report.method = "random";
      if (random.offload_prob < 0.0 || random.offload_prob > 1.0) {
        throw std::invalid_argument("baseline: offload probability outside [0,1]");
      }
      for (std::size_t i = 0; i < n; ++i) {
        double u = rng::uniform01({random.seed, random.trial,
                                   static_cast<std::uint64_t>(devices[i].id),
                                   rng::streams::kOffloadDraw});
        if (u < random.offload_prob) {
          offloaded.push_back(i);
        }
      }
      break;
    }
  }

  EdgeSolution edge = solve_edge(gather_tasks(inst, offloaded), cfg);
  report.allocation = build_allocation(devices, inst, offloaded, edge);

  std::vector<bool> mask(n, false);
  for (std::size_t i : offloaded) mask[i] = true;
  report.total_cost = edge.total_cost + local_cost_sum(inst, mask);
  return report;
}

}  // namespace mecsim
