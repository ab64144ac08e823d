#include "mecsim/solver_local.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mecsim {

LocalSolution solve_local(const DeviceProfile& dev, const SystemConfig& cfg,
                          double c_mstar) {
  if (!(c_mstar > 0.0)) {
    throw std::invalid_argument("solve_local: C(M*) must be positive");
  }
  if (!(dev.f_local_max_hz > 0.0)) {
    throw std::invalid_argument("solve_local: device CPU budget must be positive");
  }

  LocalSolution sol;
  double cycles = cfg.rho_cycles_per_mac * c_mstar;

  if (cfg.beta2 <= 0.0) {
    // Without an energy term the cost decreases in f; run at the cap.
    sol.f_local_hz = dev.f_local_max_hz;
    sol.degenerate = LocalSolution::Degenerate::Beta2Zero;
  } else if (cfg.beta1 <= 0.0) {
    // Without a delay term the infimum is at f -> 0+; return the smallest
    // positive frequency so the cost stays evaluable.
    sol.f_local_hz = std::numeric_limits<double>::min();
    sol.degenerate = LocalSolution::Degenerate::Beta1Zero;
  } else {
    double interior = std::cbrt(cfg.beta1 / (2.0 * cfg.beta2 * cfg.kappa));
    sol.f_local_hz = std::min(interior, dev.f_local_max_hz);
  }

  sol.cost = cfg.beta1 * cycles / sol.f_local_hz +
             cfg.beta2 * cfg.kappa * cycles * sol.f_local_hz * sol.f_local_hz;
  return sol;
}

}  // namespace mecsim
