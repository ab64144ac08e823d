#include "mecsim/cost.hpp"

#include <cmath>
#include <sstream>

#include "mecsim/wireless.hpp"

namespace mecsim {

const char* constraint_name(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::Accuracy: return "accuracy";
    case ConstraintKind::FrameRange: return "frame-range";
    case ConstraintKind::TimeBudget: return "time-budget";
    case ConstraintKind::EdgeCpuBudget: return "edge-cpu-budget";
    case ConstraintKind::Nonnegative: return "nonnegative";
    case ConstraintKind::LocalCpuRange: return "local-cpu-range";
    case ConstraintKind::BranchConsistency: return "branch-consistency";
  }
  return "unknown";
}

CostBreakdown device_cost(const DeviceProfile& dev, const SystemConfig& cfg,
                          const ComplexityModel& complexity,
                          const AllocationEntry& entry, double rate_bps) {
  double c = complexity.macs(entry.frames);
  double cycles = cfg.rho_cycles_per_mac * c;
  CostBreakdown out;
  if (!entry.offload) {
    if (!(entry.f_local_hz > 0.0)) {
      throw InfeasibleAllocationError(
          "device_cost: local branch with zero CPU frequency (device " +
          std::to_string(dev.id) + ")");
    }
    out.delay_s = cycles / entry.f_local_hz;
    out.energy_j = cfg.kappa * cycles * entry.f_local_hz * entry.f_local_hz;
  } else {
    if (!(entry.f_edge_hz > 0.0)) {
      throw InfeasibleAllocationError(
          "device_cost: edge branch with zero edge frequency (device " +
          std::to_string(dev.id) + ")");
    }
    auto [tx_delay, tx_energy] = tx_delay_energy(dev, entry.frames, rate_bps,
                                                 entry.time_share, dev.tx_power_w);
    out.delay_s = cycles / entry.f_edge_hz + tx_delay;
    out.energy_j = tx_energy;
  }
  out.weighted = cfg.beta1 * out.delay_s + cfg.beta2 * out.energy_j;
  return out;
}

double total_cost(std::span<const DeviceProfile> devices,
                  const SystemConfig& cfg, const ComplexityModel& complexity,
                  const Allocation& alloc, std::span<const double> rates_bps) {
  if (alloc.size() != devices.size()) {
    throw std::invalid_argument("total_cost: allocation does not cover every device");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < devices.size(); ++i) {
    double rate = i < rates_bps.size() ? rates_bps[i] : 0.0;
    sum += device_cost(devices[i], cfg, complexity, alloc[i], rate).weighted;
  }
  return sum;
}

namespace {

void add_violation(std::vector<Violation>& out, ConstraintKind kind, int dev,
                   double margin, std::string message) {
  out.push_back(Violation{kind, dev, margin, std::move(message)});
}

}  // namespace

std::vector<Violation> validate(std::span<const DeviceProfile> devices,
                                const SystemConfig& cfg, const Models& models,
                                const Allocation& alloc) {
  std::vector<Violation> out;
  if (alloc.size() != devices.size()) {
    add_violation(out, ConstraintKind::BranchConsistency, -1,
                  static_cast<double>(devices.size()) - alloc.size(),
                  "allocation size differs from device count");
    return out;
  }

  double time_sum = 0.0;
  double edge_sum = 0.0;
  for (std::size_t i = 0; i < devices.size(); ++i) {
    const DeviceProfile& dev = devices[i];
    const AllocationEntry& e = alloc[i];
    std::ostringstream tag;
    tag << "device " << dev.id;

    if (e.frames < 1 || e.frames > dev.m_max) {
      add_violation(out, ConstraintKind::FrameRange, dev.id,
                    e.frames < 1 ? 1.0 - e.frames : e.frames - dev.m_max,
                    tag.str() + ": frame count " + std::to_string(e.frames) +
                        " outside [1," + std::to_string(dev.m_max) + "]");
    } else {
      double phi = models.accuracy.accuracy(e.frames);
      if (phi < dev.accuracy_req) {
        add_violation(out, ConstraintKind::Accuracy, dev.id,
                      dev.accuracy_req - phi,
                      tag.str() + ": accuracy " + std::to_string(phi) +
                          " below requirement " +
                          std::to_string(dev.accuracy_req));
      }
    }

    if (e.time_share < 0.0 || e.f_edge_hz < 0.0 || e.f_local_hz < 0.0) {
      add_violation(out, ConstraintKind::Nonnegative, dev.id,
                    std::max({-e.time_share, -e.f_edge_hz, -e.f_local_hz}),
                    tag.str() + ": negative share or frequency");
    }

    if (e.offload) {
      if (e.f_local_hz != 0.0) {
        add_violation(out, ConstraintKind::BranchConsistency, dev.id,
                      std::abs(e.f_local_hz),
                      tag.str() + ": offloaded but local frequency set");
      }
      if (!(e.f_edge_hz > 0.0) || !(e.time_share > 0.0)) {
        add_violation(out, ConstraintKind::BranchConsistency, dev.id, 0.0,
                      tag.str() + ": offloaded with zero edge share");
      }
      time_sum += e.time_share;
      edge_sum += e.f_edge_hz;
    } else {
      if (e.f_edge_hz != 0.0 || e.time_share != 0.0) {
        add_violation(out, ConstraintKind::BranchConsistency, dev.id,
                      std::max(e.f_edge_hz, e.time_share),
                      tag.str() + ": local but edge share set");
      }
      if (!(e.f_local_hz > 0.0)) {
        add_violation(out, ConstraintKind::LocalCpuRange, dev.id, 0.0,
                      tag.str() + ": local branch with zero CPU frequency");
      } else if (e.f_local_hz > dev.f_local_max_hz * (1.0 + kFeasibilityEps)) {
        add_violation(out, ConstraintKind::LocalCpuRange, dev.id,
                      e.f_local_hz - dev.f_local_max_hz,
                      tag.str() + ": local frequency above device maximum");
      }
    }
  }

  if (time_sum > 1.0 + kFeasibilityEps) {
    add_violation(out, ConstraintKind::TimeBudget, -1, time_sum - 1.0,
                  "offloaded time shares sum to " + std::to_string(time_sum));
  }
  if (edge_sum > cfg.f_edge_max_hz * (1.0 + kFeasibilityEps)) {
    add_violation(out, ConstraintKind::EdgeCpuBudget, -1,
                  edge_sum - cfg.f_edge_max_hz,
                  "edge frequencies sum to " + std::to_string(edge_sum) +
                      " Hz against budget " +
                      std::to_string(cfg.f_edge_max_hz) + " Hz");
  }
  return out;
}

}  // namespace mecsim
