#include "mecsim/wireless.hpp"

#include <cmath>
#include <stdexcept>

namespace mecsim {

double path_loss_db(const ChannelParams& ch, double distance_km) {
  if (!(distance_km > 0.0)) {
    throw std::domain_error("path_loss_db: distance must be positive");
  }
  return ch.pathloss_intercept_db + ch.pathloss_slope * std::log10(distance_km);
}

double achievable_rate_bps(const DeviceProfile& dev, const ChannelParams& ch) {
  if (!(ch.bandwidth_hz > 0.0)) {
    throw std::domain_error("achievable_rate_bps: bandwidth must be positive");
  }
  double pl_db = path_loss_db(ch, dev.distance_km);
  double gain = std::pow(10.0, -pl_db / 10.0);
  double noise_w = dbm_to_watt(ch.noise_psd_dbm_per_hz) * ch.bandwidth_hz;
  double snr = dev.tx_power_w * gain / noise_w;
  return ch.bandwidth_hz * std::log2(1.0 + snr);
}

std::pair<double, double> tx_delay_energy(const DeviceProfile& dev, int frames,
                                          double rate_bps, double time_share,
                                          double tx_power_w) {
  if (!(rate_bps > 0.0)) {
    throw InfeasibleAllocationError("tx_delay_energy: rate must be positive");
  }
  if (!(time_share > 0.0) || time_share > 1.0) {
    throw InfeasibleAllocationError("tx_delay_energy: time share must lie in (0,1]");
  }
  double payload_bits = frames * dev.frame_bits;
  double airtime_s = payload_bits / rate_bps;
  double delay_s = airtime_s / time_share;
  double energy_j = airtime_s * tx_power_w;
  return {delay_s, energy_j};
}

}  // namespace mecsim
