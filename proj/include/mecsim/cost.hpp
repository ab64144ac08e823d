#ifndef MECSIM_COST_HPP_
#define MECSIM_COST_HPP_

#include <span>
#include <vector>

#include "mecsim/dnn.hpp"
#include "mecsim/types.hpp"

namespace mecsim {

// Delay, energy, and weighted cost of one device under an allocation entry.
// Local branch:  D = rho*C(M)/f_md,           E = kappa*rho*C(M)*f_md^2.
// Edge branch:   D = rho*C(M)/f_e + M*d/(R*t), E = (M*d/R)*p.
// Throws InfeasibleAllocationError when the active branch divides by zero.
CostBreakdown device_cost(const DeviceProfile& dev, const SystemConfig& cfg,
                          const ComplexityModel& complexity,
                          const AllocationEntry& entry, double rate_bps);

// Sum of weighted per-device costs. rates_bps may be empty when no entry
// offloads. Deterministic: devices are summed in index order.
double total_cost(std::span<const DeviceProfile> devices,
                  const SystemConfig& cfg, const ComplexityModel& complexity,
                  const Allocation& alloc, std::span<const double> rates_bps);

// Checks every problem constraint and returns the violations (empty means
// feasible). Resource sums use the kFeasibilityEps relative tolerance.
std::vector<Violation> validate(std::span<const DeviceProfile> devices,
                                const SystemConfig& cfg, const Models& models,
                                const Allocation& alloc);

}  // namespace mecsim

#endif  // MECSIM_COST_HPP_
