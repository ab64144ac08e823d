#ifndef MECSIM_CONFIG_HPP_
#define MECSIM_CONFIG_HPP_

#include <cstdint>
#include <string>

#include "mecsim/dnn.hpp"
#include "mecsim/types.hpp"
#include "mecsim/wireless.hpp"

namespace mecsim {

// Per-device defaults applied to every generated device.
struct DeviceDefaults {
  double tx_power_w = 0.1;
  double f_local_max_hz = 1.8e9;
  double accuracy_req = 0.90;
  int m_max = 16;
  int frame_width = 112;
  int frame_height = 112;
  int bytes_per_pixel = 3;
  // Fraction of the raw frame actually sent; the shipped defaults use 1/24,
  // i.e. one bit per pixel.
  double compression_factor = 1.0 / 24.0;

  double frame_bits() const {
    return static_cast<double>(frame_width) * frame_height * bytes_per_pixel *
           8.0 * compression_factor;
  }
};

struct ExperimentParams {
  int n_devices = 20;
  int trials = 100;
  std::uint64_t seed = 1;
  int threads = 0;  // 0 = one per hardware thread
  int enum_cap = 14;
  double random_offload_prob = 0.5;
  double min_distance_m = 1.0;  // distance floor to the BS

  enum class InfeasiblePolicy { Fail, Regenerate };
  InfeasiblePolicy on_infeasible = InfeasiblePolicy::Fail;
};

// Everything a run needs, loadable from a JSON file (schema in the README).
struct Config {
  SystemConfig system;
  double pathloss_intercept_db = 128.1;
  double pathloss_slope = 37.6;
  DeviceDefaults device;
  Models models;
  ExperimentParams experiment;

  ChannelParams channel() const {
    return ChannelParams{pathloss_intercept_db, pathloss_slope,
                         system.bandwidth_hz, system.noise_psd_dbm_per_hz};
  }

  // Defaults throughout match the simulation settings this tool reproduces.
  static Config defaults();
};

// Parses and validates a config file. Throws ConfigError with a message
// naming the offending field; file-system problems surface as
// std::runtime_error.
Config load_config(const std::string& path);
Config parse_config(const std::string& json_text);

// Full semantic validation of an assembled config: positivity, weight sum,
// model monotonicity over 1..m_max, and feasibility of the accuracy
// requirement. Throws ConfigError or InfeasibleAccuracyError.
void validate_config(const Config& cfg);

}  // namespace mecsim

#endif  // MECSIM_CONFIG_HPP_
