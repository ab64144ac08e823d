#ifndef MECSIM_SOLVER_EDGE_HPP_
#define MECSIM_SOLVER_EDGE_HPP_

#include <span>
#include <vector>

#include "mecsim/types.hpp"

namespace mecsim {

// One offloaded device as the edge solver sees it.
struct EdgeTask {
  int device_id = 0;
  double c_macs = 0.0;     // C(M*)
  int frames = 1;          // M*
  double frame_bits = 0.0; // d
  double tx_power_w = 0.0; // p
  double rate_bps = 0.0;   // R
};

// Proportional split of the edge CPU and the TDMA frame across the offloaded
// set, optimal for the edge cost
//   F1_n = beta1*rho*C_n/f_n + beta1*M_n*d_n/(R_n*t_n) + beta2*M_n*d_n*p_n/R_n:
//   f_n* = f_edge_max * sqrt(C_n) / sum_i sqrt(C_i)
//   t_n* = sqrt(M_n*d_n/R_n) / sum_i sqrt(M_i*d_i/R_i)
// Both budgets are met with equality. The d_n factor in the time weight drops
// out when all devices carry equal frame sizes.
struct EdgeSolution {
  std::vector<double> f_edge_hz;    // aligned with the task list
  std::vector<double> time_share;
  std::vector<double> device_cost;  // F1_n at the optimum
  double total_cost = 0.0;          // sum of device_cost
};

// Throws InfeasibleAllocationError for nonpositive rates and
// std::invalid_argument for nonpositive C or frame sizes. An empty task list
// yields an empty solution with zero cost.
EdgeSolution solve_edge(std::span<const EdgeTask> tasks,
                        const SystemConfig& cfg);

// First-order optimality report for a candidate edge allocation. The
// multipliers are reconstructed from the first device's stationarity
// conditions; residuals are relative to the multiplier scale.
struct KktReport {
  double mu_time = 0.0;        // multiplier of the time budget
  double mu_edge_cpu = 0.0;    // multiplier of the CPU budget
  double stationarity_f = 0.0; // max_n |d L/d f_n| / mu_edge_cpu
  double stationarity_t = 0.0; // max_n |d L/d t_n| / mu_time
  double slack_time = 0.0;     // |sum t - 1|
  double slack_edge_cpu = 0.0; // |sum f - f_max| / f_max

  double max_residual() const;
};

// Throws std::domain_error when any frequency or share is nonpositive.
KktReport kkt_residuals(std::span<const EdgeTask> tasks,
                        const SystemConfig& cfg,
                        std::span<const double> f_edge_hz,
                        std::span<const double> time_share);

}  // namespace mecsim

#endif  // MECSIM_SOLVER_EDGE_HPP_
