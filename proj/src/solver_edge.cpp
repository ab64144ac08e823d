#include "mecsim/solver_edge.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mecsim {

namespace {

// Compensated (Kahan) summation keeps the normalization denominators tight
// enough that the budget sums land on their targets to ~1e-15 even for
// large device sets.
class KahanSum {
 public:
  void add(double x) {
    double y = x - comp_;
    double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double time_weight(const EdgeTask& t) {
  return std::sqrt(t.frames * t.frame_bits / t.rate_bps);
}

}  // namespace

EdgeSolution solve_edge(std::span<const EdgeTask> tasks,
                        const SystemConfig& cfg) {
  EdgeSolution sol;
  if (tasks.empty()) {
    return sol;
  }
  for (const EdgeTask& t : tasks) {
    if (!(t.rate_bps > 0.0)) {
      throw InfeasibleAllocationError(
          "solve_edge: device " + std::to_string(t.device_id) +
          " has nonpositive rate");
    }
    if (!(t.c_macs > 0.0) || !(t.frame_bits > 0.0) || t.frames < 1) {
      throw std::invalid_argument(
          "solve_edge: device " + std::to_string(t.device_id) +
          " has nonpositive workload");
    }
  }

  KahanSum cpu_weights, tdma_weights;
  for (const EdgeTask& t : tasks) {
    cpu_weights.add(std::sqrt(t.c_macs));
    tdma_weights.add(time_weight(t));
  }
  double cpu_norm = cpu_weights.value();
  double tdma_norm = tdma_weights.value();

  sol.f_edge_hz.reserve(tasks.size());
  sol.time_share.reserve(tasks.size());
  sol.device_cost.reserve(tasks.size());
  KahanSum cost;
  for (const EdgeTask& t : tasks) {
    double f = cfg.f_edge_max_hz * std::sqrt(t.c_macs) / cpu_norm;
    double share = time_weight(t) / tdma_norm;
    double airtime = t.frames * t.frame_bits / t.rate_bps;
    double f1 = cfg.beta1 * cfg.rho_cycles_per_mac * t.c_macs / f +
                cfg.beta1 * airtime / share +
                cfg.beta2 * airtime * t.tx_power_w;
    sol.f_edge_hz.push_back(f);
    sol.time_share.push_back(share);
    sol.device_cost.push_back(f1);
    cost.add(f1);
  }
  sol.total_cost = cost.value();
  return sol;
}

double KktReport::max_residual() const {
  return std::max({stationarity_f, stationarity_t, slack_time, slack_edge_cpu});
}

KktReport kkt_residuals(std::span<const EdgeTask> tasks,
                        const SystemConfig& cfg,
                        std::span<const double> f_edge_hz,
                        std::span<const double> time_share) {
  if (tasks.empty() || f_edge_hz.size() != tasks.size() ||
      time_share.size() != tasks.size()) {
    throw std::invalid_argument("kkt_residuals: mismatched candidate solution");
  }
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (!(f_edge_hz[i] > 0.0) || !(time_share[i] > 0.0)) {
      throw std::domain_error("kkt_residuals: entries must be positive");
    }
  }

  KktReport rep;
  // Stationarity fixes the multipliers; recover them from the first device.
  double b1rho = cfg.beta1 * cfg.rho_cycles_per_mac;
  rep.mu_edge_cpu = b1rho * tasks[0].c_macs / (f_edge_hz[0] * f_edge_hz[0]);
  rep.mu_time = cfg.beta1 * tasks[0].frames * tasks[0].frame_bits /
                (tasks[0].rate_bps * time_share[0] * time_share[0]);

  KahanSum f_sum, t_sum;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const EdgeTask& t = tasks[i];
    double grad_f = -b1rho * t.c_macs / (f_edge_hz[i] * f_edge_hz[i]) +
                    rep.mu_edge_cpu;
    double grad_t = -cfg.beta1 * t.frames * t.frame_bits /
                        (t.rate_bps * time_share[i] * time_share[i]) +
                    rep.mu_time;
    double f_scale = rep.mu_edge_cpu > 0.0 ? rep.mu_edge_cpu : 1.0;
    double t_scale = rep.mu_time > 0.0 ? rep.mu_time : 1.0;
    rep.stationarity_f = std::max(rep.stationarity_f, std::abs(grad_f) / f_scale);
    rep.stationarity_t = std::max(rep.stationarity_t, std::abs(grad_t) / t_scale);
    f_sum.add(f_edge_hz[i]);
    t_sum.add(time_share[i]);
  }
  rep.slack_time = std::abs(t_sum.value() - 1.0);
  rep.slack_edge_cpu =
      std::abs(f_sum.value() - cfg.f_edge_max_hz) / cfg.f_edge_max_hz;
  return rep;
}

}  // namespace mecsim
