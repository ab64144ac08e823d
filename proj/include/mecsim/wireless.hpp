#ifndef MECSIM_WIRELESS_HPP_
#define MECSIM_WIRELESS_HPP_

#include <cmath>
#include <utility>

#include "mecsim/types.hpp"

namespace mecsim {

// Radio parameters. Path loss follows the standard cellular model
// PL = intercept + slope*log10(D_km); the uplink rate is Shannon capacity
// over the full band with noise power N0*Bw, no fading or antenna gains.
struct ChannelParams {
  double pathloss_intercept_db = 128.1;
  double pathloss_slope = 37.6;  // dB per decade of km
  double bandwidth_hz = 5e6;
  double noise_psd_dbm_per_hz = -174.0;
};

// dBm -> W.
inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

// Path loss in dB at the given distance. Throws std::domain_error for
// nonpositive distance.
double path_loss_db(const ChannelParams& ch, double distance_km);

// Achievable uplink rate in bit/s for a device at its profile distance and
// transmit power. Strictly decreasing in distance, increasing in power.
double achievable_rate_bps(const DeviceProfile& dev, const ChannelParams& ch);

// Transmission delay and energy for M frames under a TDMA share.
// delay = M*d/(R*t); energy = (M*d/R)*p. The share stretches delay only:
// the device radiates for the fixed airtime M*d/R regardless of t.
std::pair<double, double> tx_delay_energy(const DeviceProfile& dev, int frames,
                                          double rate_bps, double time_share,
                                          double tx_power_w);

}  // namespace mecsim

#endif  // MECSIM_WIRELESS_HPP_
