#ifndef MECSIM_SOLVER_LOCAL_HPP_
#define MECSIM_SOLVER_LOCAL_HPP_

#include "mecsim/types.hpp"

namespace mecsim {

// Closed-form optimum of the local-execution cost
//   F0(f) = beta1*rho*C/f + beta2*kappa*rho*C*f^2
// over 0 < f <= f_local_max:  f* = min{ cbrt(beta1/(2*beta2*kappa)), f_max }.
// The interior point depends only on the weights and kappa, not on C.
struct LocalSolution {
  double f_local_hz = 0.0;
  double cost = 0.0;  // F0 evaluated at f_local_hz

  enum class Degenerate {
    None,
    Beta1Zero,  // cost has no delay term; pushed to the smallest positive f
    Beta2Zero   // cost strictly decreasing in f; clipped at f_local_max
  };
  Degenerate degenerate = Degenerate::None;
};

LocalSolution solve_local(const DeviceProfile& dev, const SystemConfig& cfg,
                          double c_mstar);

}  // namespace mecsim

#endif  // MECSIM_SOLVER_LOCAL_HPP_
