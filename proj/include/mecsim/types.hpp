#ifndef MECSIM_TYPES_HPP_
#define MECSIM_TYPES_HPP_

#include <stdexcept>
#include <string>
#include <vector>

namespace mecsim {

// Thrown when a candidate allocation cannot be evaluated (zero frequency or
// zero time share on the active branch, nonpositive rate, ...).
struct InfeasibleAllocationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when a device's accuracy requirement cannot be met within m_max frames.
struct InfeasibleAccuracyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown on malformed or inconsistent configuration input.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One mobile device. All quantities in SI units (Hz, W, bits); distances in km
// only because the path-loss model is written per km.
struct DeviceProfile {
  int id = 0;
  double distance_km = 0.0;     // distance to the base station
  double tx_power_w = 0.0;      // uplink transmit power
  double frame_bits = 0.0;      // data size of one video frame, in bits
  double f_local_max_hz = 0.0;  // device CPU budget
  double accuracy_req = 0.0;    // required inference accuracy, in (0, 1]
  int m_max = 1;                // maximum number of input video frames
};

// Shared system parameters. beta1/beta2 weight delay vs. energy in the cost.
struct SystemConfig {
  double bandwidth_hz = 5e6;
  double noise_psd_dbm_per_hz = -174.0;
  double f_edge_max_hz = 22e9;
  double rho_cycles_per_mac = 0.12;  // CPU cycles per multiply-accumulate
  double kappa = 1e-28;              // CPU energy coefficient, J*s^2/cycle^3
  double beta1 = 0.5;                // delay weight
  double beta2 = 0.5;                // energy weight
  double area_m = 500.0;             // deployment square side
};

// Per-device part of a solution. Exactly one execution branch is active:
// offload == false -> f_local_hz used, f_edge_hz == 0 and time_share == 0;
// offload == true  -> f_edge_hz/time_share used, f_local_hz stored as 0.
struct AllocationEntry {
  bool offload = false;
  int frames = 1;           // M_n, number of input video frames
  double f_local_hz = 0.0;  // local CPU frequency (local branch)
  double f_edge_hz = 0.0;   // edge CPU share (edge branch)
  double time_share = 0.0;  // TDMA uplink time fraction (edge branch)
};

// Full solution, entries aligned with the device vector by index.
using Allocation = std::vector<AllocationEntry>;

// Delay/energy of one device plus their weighted combination.
struct CostBreakdown {
  double delay_s = 0.0;
  double energy_j = 0.0;
  double weighted = 0.0;  // beta1*delay_s + beta2*energy_j
};

enum class ConstraintKind {
  Accuracy,          // Phi(M_n) < alpha_n
  FrameRange,        // M_n outside [1, m_max]
  TimeBudget,        // sum of offloaded time shares exceeds 1
  EdgeCpuBudget,     // sum of offloaded edge frequencies exceeds f_edge_max
  Nonnegative,       // negative time share or frequency
  LocalCpuRange,     // f_local outside [0, f_local_max] or 0 on active branch
  BranchConsistency  // inactive-branch fields not zeroed, or zero active ones
};

const char* constraint_name(ConstraintKind kind);

// One violated constraint; margin is how far past the limit the value lies
// (positive by convention). device_id is -1 for system-wide sums.
struct Violation {
  ConstraintKind kind;
  int device_id = -1;
  double margin = 0.0;
  std::string message;
};

// Relative tolerance used when checking resource sums against their budgets.
// Closed-form solutions hit the budgets with equality, so exact comparison
// would flap on rounding.
inline constexpr double kFeasibilityEps = 1e-9;

}  // namespace mecsim

#endif  // MECSIM_TYPES_HPP_
