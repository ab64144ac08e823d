#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "mecsim/cost.hpp"
#include "mecsim/offload.hpp"
#include "mecsim/wireless.hpp"

using namespace mecsim;

namespace {

Models test_models() {
  // affine workload with the same scale as the shipped network; the default
  // accuracy curve needs 6 frames for the 0.9 requirement
  return Models(ComplexityModel::affine(0.0, 4.9e8),
                AccuracyModel::saturating(0.95, 0.5, 0.4));
}

DeviceProfile make_device(int id, double distance_km) {
  DeviceProfile dev;
  dev.id = id;
  dev.distance_km = distance_km;
  dev.tx_power_w = 0.1;
  dev.frame_bits = 12544.0;
  dev.f_local_max_hz = 1.8e9;
  dev.accuracy_req = 0.9;
  dev.m_max = 16;
  return dev;
}

std::vector<double> rates_for(const std::vector<DeviceProfile>& devices) {
  ChannelParams ch;
  std::vector<double> rates;
  for (const DeviceProfile& dev : devices) {
    rates.push_back(achievable_rate_bps(dev, ch));
  }
  return rates;
}

std::vector<DeviceProfile> random_devices(std::mt19937& rng, int n) {
  std::uniform_real_distribution<double> dist(0.05, 0.7);
  std::vector<DeviceProfile> devices;
  for (int i = 0; i < n; ++i) {
    devices.push_back(make_device(i, dist(rng)));
  }
  return devices;
}

int offloaded_count(const Allocation& alloc) {
  int n = 0;
  for (const AllocationEntry& e : alloc) {
    n += e.offload ? 1 : 0;
  }
  return n;
}

}  // namespace

TEST_CASE("a well-connected single device stays offloaded") {
  SystemConfig cfg;
  Models models = test_models();
  std::vector<DeviceProfile> devices = {make_device(0, 0.05)};
  std::vector<double> rates = rates_for(devices);

  SolveReport greedy = greedy_offload(devices, cfg, models, rates);
  CHECK(greedy.method == "greedy");
  CHECK(greedy.allocation[0].offload);
  CHECK(greedy.allocation[0].frames == 6);
  CHECK(greedy.allocation[0].f_edge_hz == cfg.f_edge_max_hz);
  CHECK(greedy.allocation[0].time_share == 1.0);
  CHECK(greedy.moves.empty());
  CHECK(greedy.iterations == 1);  // one rejected probe ends the search

  SolveReport best = enumerate_offload(devices, cfg, models, rates);
  CHECK(best.method == "enumeration");
  CHECK(best.allocation[0].offload);
  CHECK(best.total_cost == doctest::Approx(greedy.total_cost).epsilon(1e-12));
}

TEST_CASE("a device with a dismal uplink computes locally") {
  SystemConfig cfg;
  Models models = test_models();
  std::vector<DeviceProfile> devices = {make_device(0, 0.05)};
  std::vector<double> rates = {1e4};  // 7.5 s of airtime for 6 frames

  SolveReport greedy = greedy_offload(devices, cfg, models, rates);
  CHECK(!greedy.allocation[0].offload);
  CHECK(greedy.moves == std::vector<int>{0});
  CHECK(greedy.cost_trace.size() == 1);
  CHECK(greedy.allocation[0].f_local_hz ==
        doctest::Approx(1709975946.676697).epsilon(1e-9));

  SolveReport best = enumerate_offload(devices, cfg, models, rates);
  CHECK(!best.allocation[0].offload);
  CHECK(best.total_cost == doctest::Approx(greedy.total_cost).epsilon(1e-12));
}

TEST_CASE("enumeration lower-bounds greedy, greedy lower-bounds all-edge") {
  Models models = test_models();
  std::mt19937 rng(31);
  for (int rep = 0; rep < 30; ++rep) {
    SystemConfig cfg;
    // a tight edge CPU makes partial offloading optimal at small N
    cfg.f_edge_max_hz = (rep % 2 == 0) ? 5e9 : 22e9;
    int n = 2 + static_cast<int>(rng() % 9);
    std::vector<DeviceProfile> devices = random_devices(rng, n);
    std::vector<double> rates = rates_for(devices);

    SolveReport best = enumerate_offload(devices, cfg, models, rates);
    SolveReport greedy = greedy_offload(devices, cfg, models, rates);
    SolveReport edge = baseline(devices, cfg, models, rates,
                                BaselineKind::EdgeAll);
    SolveReport local = baseline(devices, cfg, models, rates,
                                 BaselineKind::LocalAll);

    CHECK(best.total_cost <= greedy.total_cost * (1.0 + 1e-12));
    CHECK(greedy.total_cost <= edge.total_cost * (1.0 + 1e-12));
    CHECK(best.total_cost <= local.total_cost * (1.0 + 1e-12));

    // every reported allocation is feasible
    for (const SolveReport* r : {&best, &greedy, &edge, &local}) {
      CHECK(validate(devices, cfg, models, r->allocation).empty());
    }

    // the reported cost is the cost of the reported allocation
    CHECK(greedy.total_cost ==
          doctest::Approx(total_cost(devices, cfg, models.complexity,
                                     greedy.allocation, rates))
              .epsilon(1e-12));
    CHECK(best.total_cost ==
          doctest::Approx(total_cost(devices, cfg, models.complexity,
                                     best.allocation, rates))
              .epsilon(1e-12));
  }
}

TEST_CASE("greedy bookkeeping: trace, moves, and probe counts") {
  Models models = test_models();
  SystemConfig cfg;
  cfg.f_edge_max_hz = 5e9;
  std::mt19937 rng(32);
  for (int rep = 0; rep < 20; ++rep) {
    int n = 3 + static_cast<int>(rng() % 8);
    std::vector<DeviceProfile> devices = random_devices(rng, n);
    std::vector<double> rates = rates_for(devices);
    SolveReport rep_g = greedy_offload(devices, cfg, models, rates);

    CHECK(rep_g.moves.size() == rep_g.cost_trace.size());
    CHECK(static_cast<int>(rep_g.moves.size()) <= n);
    CHECK(rep_g.iterations <= n + 1);
    CHECK(rep_g.iterations >= static_cast<int>(rep_g.moves.size()));
    for (std::size_t i = 1; i < rep_g.cost_trace.size(); ++i) {
      CHECK(rep_g.cost_trace[i] < rep_g.cost_trace[i - 1]);
    }
    CHECK(offloaded_count(rep_g.allocation) ==
          n - static_cast<int>(rep_g.moves.size()));
    if (!rep_g.cost_trace.empty()) {
      CHECK(rep_g.total_cost == rep_g.cost_trace.back());
    }
  }
}

TEST_CASE("greedy equals all-edge when no move helps") {
  Models models = test_models();
  SystemConfig cfg;
  std::vector<DeviceProfile> devices;
  for (int i = 0; i < 5; ++i) {
    devices.push_back(make_device(i, 0.05 + 0.02 * i));
  }
  std::vector<double> rates = rates_for(devices);
  SolveReport greedy = greedy_offload(devices, cfg, models, rates);
  SolveReport edge = baseline(devices, cfg, models, rates, BaselineKind::EdgeAll);
  REQUIRE(greedy.moves.empty());
  CHECK(greedy.total_cost == edge.total_cost);
  for (std::size_t i = 0; i < devices.size(); ++i) {
    CHECK(greedy.allocation[i].f_edge_hz == edge.allocation[i].f_edge_hz);
    CHECK(greedy.allocation[i].time_share == edge.allocation[i].time_share);
  }
}

TEST_CASE("equal gaps break ties toward the smallest id") {
  Models models = test_models();
  SystemConfig cfg;
  // identical devices with a hopeless uplink: everyone ends local, and the
  // equal-gap candidates must leave in id order
  std::vector<DeviceProfile> devices = {make_device(0, 0.3), make_device(1, 0.3),
                                        make_device(2, 0.3)};
  std::vector<double> rates = {1e4, 1e4, 1e4};
  SolveReport greedy = greedy_offload(devices, cfg, models, rates);
  CHECK(greedy.moves == std::vector<int>{0, 1, 2});
  CHECK(offloaded_count(greedy.allocation) == 0);
}

TEST_CASE("extended greedy never ends above plain greedy") {
  Models models = test_models();
  std::mt19937 rng(33);
  for (int rep = 0; rep < 20; ++rep) {
    SystemConfig cfg;
    cfg.f_edge_max_hz = 4e9;
    std::vector<DeviceProfile> devices = random_devices(rng, 8);
    std::vector<double> rates = rates_for(devices);
    SolveReport plain = greedy_offload(devices, cfg, models, rates);
    GreedyOptions opts;
    opts.extended = true;
    SolveReport ext = greedy_offload(devices, cfg, models, rates, opts);
    CHECK(ext.method == "greedy-extended");
    CHECK(ext.total_cost <= plain.total_cost * (1.0 + 1e-12));
    SolveReport best = enumerate_offload(devices, cfg, models, rates);
    CHECK(best.total_cost <= ext.total_cost * (1.0 + 1e-12));
  }
}

TEST_CASE("enumeration respects its device cap") {
  Models models = test_models();
  SystemConfig cfg;
  std::mt19937 rng(34);
  std::vector<DeviceProfile> devices = random_devices(rng, 15);
  std::vector<double> rates = rates_for(devices);
  CHECK_THROWS_AS(enumerate_offload(devices, cfg, models, rates),
                  std::invalid_argument);  // default cap is 14
  std::vector<DeviceProfile> three = random_devices(rng, 3);
  CHECK_THROWS_AS(enumerate_offload(three, cfg, models, rates_for(three), 2),
                  std::invalid_argument);
  CHECK_NOTHROW(enumerate_offload(three, cfg, models, rates_for(three), 3));
}

TEST_CASE("random baseline matches its degenerate endpoints") {
  Models models = test_models();
  SystemConfig cfg;
  std::mt19937 rng(35);
  std::vector<DeviceProfile> devices = random_devices(rng, 12);
  std::vector<double> rates = rates_for(devices);

  RandomPolicy never;
  never.offload_prob = 0.0;
  never.seed = 7;
  SolveReport r0 = baseline(devices, cfg, models, rates, BaselineKind::Random, never);
  SolveReport local = baseline(devices, cfg, models, rates, BaselineKind::LocalAll);
  CHECK(r0.total_cost == local.total_cost);
  CHECK(offloaded_count(r0.allocation) == 0);

  RandomPolicy always;
  always.offload_prob = 1.0;
  always.seed = 7;
  SolveReport r1 = baseline(devices, cfg, models, rates, BaselineKind::Random, always);
  SolveReport edge = baseline(devices, cfg, models, rates, BaselineKind::EdgeAll);
  CHECK(r1.total_cost == edge.total_cost);
  CHECK(offloaded_count(r1.allocation) == 12);

  RandomPolicy bad;
  bad.offload_prob = 1.5;
  CHECK_THROWS_AS(baseline(devices, cfg, models, rates, BaselineKind::Random, bad),
                  std::invalid_argument);
}

TEST_CASE("random baseline draws are reproducible and trial-dependent") {
  Models models = test_models();
  SystemConfig cfg;
  std::mt19937 rng(36);
  std::vector<DeviceProfile> devices = random_devices(rng, 16);
  std::vector<double> rates = rates_for(devices);

  RandomPolicy policy;
  policy.offload_prob = 0.5;
  policy.seed = 42;
  policy.trial = 3;
  SolveReport a = baseline(devices, cfg, models, rates, BaselineKind::Random, policy);
  SolveReport b = baseline(devices, cfg, models, rates, BaselineKind::Random, policy);
  CHECK(a.total_cost == b.total_cost);
  for (std::size_t i = 0; i < devices.size(); ++i) {
    CHECK(a.allocation[i].offload == b.allocation[i].offload);
  }

  // across trials the offload patterns vary
  std::set<std::vector<bool>> patterns;
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    policy.trial = trial;
    SolveReport r = baseline(devices, cfg, models, rates, BaselineKind::Random, policy);
    std::vector<bool> pat;
    for (const AllocationEntry& e : r.allocation) pat.push_back(e.offload);
    patterns.insert(pat);
  }
  CHECK(patterns.size() > 1);
}

TEST_CASE("empty device lists are no-ops") {
  Models models = test_models();
  SystemConfig cfg;
  std::vector<DeviceProfile> none;
  std::vector<double> no_rates;
  CHECK(greedy_offload(none, cfg, models, no_rates).total_cost == 0.0);
  CHECK(enumerate_offload(none, cfg, models, no_rates).total_cost == 0.0);
  CHECK(baseline(none, cfg, models, no_rates, BaselineKind::EdgeAll).total_cost == 0.0);
}

TEST_CASE("rates must cover every device") {
  Models models = test_models();
  SystemConfig cfg;
  std::mt19937 rng(37);
  std::vector<DeviceProfile> devices = random_devices(rng, 4);
  std::vector<double> rates = {1e7, 1e7};
  CHECK_THROWS_AS(greedy_offload(devices, cfg, models, rates),
                  std::invalid_argument);
}
