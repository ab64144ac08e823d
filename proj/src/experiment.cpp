#include "mecsim/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <utility>

#include "mecsim/cost.hpp"
#include "mecsim/rng.hpp"
#include "mecsim/wireless.hpp"

namespace mecsim {

const char* method_name(Method m) {
  switch (m) {
    case Method::Greedy: return "greedy";
    case Method::Enumeration: return "enumeration";
    case Method::LocalAll: return "local-all";
    case Method::EdgeAll: return "edge-all";
    case Method::Random: return "random";
  }
  return "?";
}

Method method_from_name(const std::string& name) {
  if (name == "greedy") return Method::Greedy;
  if (name == "enumeration" || name == "enum") return Method::Enumeration;
  if (name == "local-all" || name == "local") return Method::LocalAll;
  if (name == "edge-all" || name == "edge") return Method::EdgeAll;
  if (name == "random") return Method::Random;
  throw std::invalid_argument("unknown method: " + name);
}

Scenario generate_scenario(const Config& cfg, std::uint64_t trial) {
  return generate_scenario(cfg, trial, cfg.experiment.n_devices);
}

Scenario generate_scenario(const Config& cfg, std::uint64_t trial,
                           int n_devices) {
  if (n_devices < 0) {
    throw std::invalid_argument("generate_scenario: negative device count");
  }
  const std::uint64_t seed = cfg.experiment.seed;
  const double area = cfg.system.area_m;
  const double cx = area / 2.0;
  const double cy = area / 2.0;
  const ChannelParams channel = cfg.channel();

  Scenario sc;
  sc.seed = seed;
  sc.trial = trial;
  sc.devices.reserve(static_cast<std::size_t>(n_devices));
  for (int i = 0; i < n_devices; ++i) {
    const std::uint64_t di = static_cast<std::uint64_t>(i);
    DeviceProfile dev;
    dev.id = i;
    dev.tx_power_w = cfg.device.tx_power_w;
    dev.f_local_max_hz = cfg.device.f_local_max_hz;
    dev.accuracy_req = cfg.device.accuracy_req;
    dev.m_max = cfg.device.m_max;
    dev.frame_bits = cfg.device.frame_bits();

    // Drop the device uniformly in the square; the base station sits at the
    // center. A redraw (keyed by attempt number) only triggers if the spot
    // yields an unusable uplink, which the distance floor normally prevents.
    const int max_attempts = 100;
    bool placed = false;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
      double x, y;
      if (attempt == 0) {
        x = rng::uniform01({seed, trial, di, rng::streams::kPositionX}) * area;
        y = rng::uniform01({seed, trial, di, rng::streams::kPositionY}) * area;
      } else {
        x = rng::uniform01({seed, trial, di, rng::streams::kPositionX,
                            static_cast<std::uint64_t>(attempt)}) * area;
        y = rng::uniform01({seed, trial, di, rng::streams::kPositionY,
                            static_cast<std::uint64_t>(attempt)}) * area;
      }
      double dist_m = std::max(std::hypot(x - cx, y - cy),
                               cfg.experiment.min_distance_m);
      dev.distance_km = dist_m / 1000.0;
      double rate = achievable_rate_bps(dev, channel);
      if (std::isfinite(rate) && rate > 0.0) {
        placed = true;
        break;
      }
      if (cfg.experiment.on_infeasible ==
          ExperimentParams::InfeasiblePolicy::Fail) {
        break;
      }
    }
    if (!placed) {
      throw InfeasibleAllocationError(
          "generate_scenario: device " + std::to_string(i) +
          " has no usable uplink at any sampled position");
    }
    sc.devices.push_back(dev);
  }
  return sc;
}

std::vector<double> scenario_rates(const Config& cfg, const Scenario& sc) {
  const ChannelParams channel = cfg.channel();
  std::vector<double> rates;
  rates.reserve(sc.devices.size());
  for (const DeviceProfile& dev : sc.devices) {
    rates.push_back(achievable_rate_bps(dev, channel));
  }
  return rates;
}

SolveReport solve_scenario(const Config& cfg, const Scenario& sc,
                           std::span<const double> rates, Method method) {
  switch (method) {
    case Method::Greedy:
      return greedy_offload(sc.devices, cfg.system, cfg.models, rates,
                            GreedyOptions{});
    case Method::Enumeration:
      return enumerate_offload(sc.devices, cfg.system, cfg.models, rates,
                               cfg.experiment.enum_cap);
    case Method::LocalAll:
      return baseline(sc.devices, cfg.system, cfg.models, rates,
                      BaselineKind::LocalAll, RandomPolicy{});
    case Method::EdgeAll:
      return baseline(sc.devices, cfg.system, cfg.models, rates,
                      BaselineKind::EdgeAll, RandomPolicy{});
    case Method::Random: {
      RandomPolicy policy;
      policy.offload_prob = cfg.experiment.random_offload_prob;
      policy.seed = sc.seed;
      policy.trial = sc.trial;
      return baseline(sc.devices, cfg.system, cfg.models, rates,
                      BaselineKind::Random, policy);
    }
  }
  throw std::invalid_argument("solve_scenario: unknown method");
}

namespace {

TrialResult summarize_trial(const Config& cfg, const Scenario& sc,
                            std::span<const double> rates,
                            const SolveReport& report, std::uint64_t trial,
                            Method method) {
  TrialResult tr;
  tr.trial = trial;
  tr.method = method;
  tr.n_devices = static_cast<int>(sc.devices.size());
  tr.total_cost = report.total_cost;
  if (sc.devices.empty()) {
    return tr;
  }
  double delay_sum = 0.0;
  double energy_sum = 0.0;
  int offloaded = 0;
  for (std::size_t i = 0; i < sc.devices.size(); ++i) {
    CostBreakdown cb = device_cost(sc.devices[i], cfg.system,
                                   cfg.models.complexity,
                                   report.allocation[i], rates[i]);
    delay_sum += cb.delay_s;
    energy_sum += cb.energy_j;
    offloaded += report.allocation[i].offload ? 1 : 0;
  }
  double n = static_cast<double>(sc.devices.size());
  tr.avg_cost = report.total_cost / n;
  tr.avg_delay_s = delay_sum / n;
  tr.avg_energy_j = energy_sum / n;
  tr.offloading_rate = offloaded / n;
  return tr;
}

}  // namespace

ExperimentResult run_trials(const Config& cfg, int n_trials,
                            std::span<const Method> methods) {
  if (n_trials < 0) {
    throw std::invalid_argument("run_trials: negative trial count");
  }
  ExperimentResult result;
  std::vector<std::vector<TrialResult>> slots(
      static_cast<std::size_t>(n_trials));

  int threads = cfg.experiment.threads;
  if (threads <= 0) {
    threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 0) threads = 1;
  }
  threads = std::min(threads, std::max(n_trials, 1));

  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
  // Per-worker per-method solver time; summed after the join.
  std::vector<std::vector<double>> solve_time(
      static_cast<std::size_t>(threads),
      std::vector<double>(methods.size(), 0.0));

  auto worker = [&](int wid) {
    try {
      for (;;) {
        int t = next.fetch_add(1, std::memory_order_relaxed);
        if (t >= n_trials) break;
        std::uint64_t trial = static_cast<std::uint64_t>(t);
        Scenario sc = generate_scenario(cfg, trial);
        std::vector<double> rates = scenario_rates(cfg, sc);
        std::vector<TrialResult>& slot = slots[static_cast<std::size_t>(t)];
        slot.reserve(methods.size());
        for (std::size_t mi = 0; mi < methods.size(); ++mi) {
          auto t0 = std::chrono::steady_clock::now();
          SolveReport rep = solve_scenario(cfg, sc, rates, methods[mi]);
          auto t1 = std::chrono::steady_clock::now();
          solve_time[static_cast<std::size_t>(wid)][mi] +=
              std::chrono::duration<double>(t1 - t0).count();
          slot.push_back(
              summarize_trial(cfg, sc, rates, rep, trial, methods[mi]));
        }
      }
    } catch (...) {
      errors[static_cast<std::size_t>(wid)] = std::current_exception();
    }
  };

  if (threads <= 1 || n_trials <= 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back(worker, w);
    }
    for (std::thread& th : pool) {
      th.join();
    }
  }
  for (const std::exception_ptr& err : errors) {
    if (err) std::rethrow_exception(err);
  }

  // Merge by trial index, so the ordering (and every mean below) is
  // independent of which worker ran which trial.
  result.trials.reserve(static_cast<std::size_t>(n_trials) * methods.size());
  for (const std::vector<TrialResult>& slot : slots) {
    result.trials.insert(result.trials.end(), slot.begin(), slot.end());
  }

  result.aggregates.reserve(methods.size());
  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    MethodAggregate agg;
    agg.method = methods[mi];
    agg.trials = n_trials;
    for (int t = 0; t < n_trials; ++t) {
      const TrialResult& tr = slots[static_cast<std::size_t>(t)][mi];
      agg.avg_cost += tr.avg_cost;
      agg.avg_delay_s += tr.avg_delay_s;
      agg.avg_energy_j += tr.avg_energy_j;
      agg.offloading_rate += tr.offloading_rate;
    }
    if (n_trials > 0) {
      agg.avg_cost /= n_trials;
      agg.avg_delay_s /= n_trials;
      agg.avg_energy_j /= n_trials;
      agg.offloading_rate /= n_trials;
    }
    for (int w = 0; w < threads; ++w) {
      agg.wall_time_s += solve_time[static_cast<std::size_t>(w)][mi];
    }
    result.aggregates.push_back(agg);
  }
  return result;
}

const char* sweep_axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::DeviceCount: return "devices";
    case SweepAxis::Bandwidth: return "bandwidth";
    case SweepAxis::EdgeCompute: return "edge-compute";
    case SweepAxis::Beta: return "beta";
  }
  return "?";
}

SweepAxis sweep_axis_from_name(const std::string& name) {
  if (name == "devices") return SweepAxis::DeviceCount;
  if (name == "bandwidth") return SweepAxis::Bandwidth;
  if (name == "edge-compute") return SweepAxis::EdgeCompute;
  if (name == "beta") return SweepAxis::Beta;
  throw std::invalid_argument("unknown sweep axis: " + name);
}

Config apply_axis(const Config& cfg, SweepAxis axis, double value) {
  Config out = cfg;
  switch (axis) {
    case SweepAxis::DeviceCount: {
      double rounded = std::round(value);
      if (rounded < 0.0 || rounded != value) {
        throw std::invalid_argument(
            "device-count sweep values must be nonnegative integers");
      }
      out.experiment.n_devices = static_cast<int>(rounded);
      break;
    }
    case SweepAxis::Bandwidth:
      out.system.bandwidth_hz = value;
      break;
    case SweepAxis::EdgeCompute:
      out.system.f_edge_max_hz = value;
      break;
    case SweepAxis::Beta:
      if (value < 0.0 || value > 1.0) {
        throw std::invalid_argument("beta sweep values must lie in [0,1]");
      }
      out.system.beta1 = value;
      out.system.beta2 = 1.0 - value;
      break;
  }
  return out;
}

SweepResult sweep(const Config& cfg, SweepAxis axis,
                  std::span<const double> values,
                  std::span<const Method> methods) {
  SweepResult sr;
  sr.axis = axis;
  sr.values.assign(values.begin(), values.end());
  sr.results.reserve(values.size());
  for (double v : values) {
    Config point = apply_axis(cfg, axis, v);
    sr.results.push_back(run_trials(point, point.experiment.trials, methods));
  }
  return sr;
}

std::string format_double(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

void write_aggregate_csv(std::ostream& out, const SweepResult& sweep) {
  out << "axis,value,method,trials,avg_cost,avg_delay_s,avg_energy_j,"
         "offloading_rate\n";
  const char* axis = sweep_axis_name(sweep.axis);
  for (std::size_t vi = 0; vi < sweep.values.size(); ++vi) {
    for (const MethodAggregate& agg : sweep.results[vi].aggregates) {
      out << axis << ',' << format_double(sweep.values[vi]) << ','
          << method_name(agg.method) << ',' << agg.trials << ','
          << format_double(agg.avg_cost) << ','
          << format_double(agg.avg_delay_s) << ','
          << format_double(agg.avg_energy_j) << ','
          << format_double(agg.offloading_rate) << '\n';
    }
  }
}

void write_trials_csv(std::ostream& out, const SweepResult& sweep) {
  out << "axis,value,method,trial,n_devices,total_cost,avg_cost,avg_delay_s,"
         "avg_energy_j,offloading_rate\n";
  const char* axis = sweep_axis_name(sweep.axis);
  for (std::size_t vi = 0; vi < sweep.values.size(); ++vi) {
    for (const TrialResult& tr : sweep.results[vi].trials) {
      out << axis << ',' << format_double(sweep.values[vi]) << ','
          << method_name(tr.method) << ',' << tr.trial << ',' << tr.n_devices
          << ',' << format_double(tr.total_cost) << ','
          << format_double(tr.avg_cost) << ','
          << format_double(tr.avg_delay_s) << ','
          << format_double(tr.avg_energy_j) << ','
          << format_double(tr.offloading_rate) << '\n';
    }
  }
}

void write_allocation_csv(std::ostream& out, const Config& cfg,
                          const Scenario& sc, std::span<const double> rates,
                          const SolveReport& report) {
  out << "device,offload,frames,f_local_hz,f_edge_hz,time_share,rate_bps,"
         "delay_s,energy_j,weighted_cost\n";
  for (std::size_t i = 0; i < sc.devices.size(); ++i) {
    const AllocationEntry& e = report.allocation[i];
    CostBreakdown cb = device_cost(sc.devices[i], cfg.system,
                                   cfg.models.complexity, e, rates[i]);
    out << sc.devices[i].id << ',' << (e.offload ? 1 : 0) << ',' << e.frames
        << ',' << format_double(e.f_local_hz) << ','
        << format_double(e.f_edge_hz) << ',' << format_double(e.time_share)
        << ',' << format_double(rates[i]) << ',' << format_double(cb.delay_s)
        << ',' << format_double(cb.energy_j) << ','
        << format_double(cb.weighted) << '\n';
  }
}

}  // namespace mecsim
