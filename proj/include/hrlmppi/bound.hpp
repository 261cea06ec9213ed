#pragma once

#include "hrlmppi/common.hpp"

namespace hrlmppi {

// Inputs of the value-error bound: mixing ratio, model/reward mismatch
// levels, horizon, discount, reward spread, H-step return spread, control
// diameter and the top eigenvalue of the inverse noise covariance.
struct BoundInputs {
  double rho = 0;
  double alpha_p = 0;   // total-variation dynamics mismatch, in [0, 2]
  double alpha_r = 0;   // reward mismatch
  int horizon = 10;
  double gamma = 0.99;
  double span_r = 0;
  double r_max = 0;
  double span_g = 0;
  double d_u = 0;
  double lambda_max = 0;  // largest eigenvalue of Sigma^{-1}

  void validate() const;
};

struct BoundBreakdown {
  double dynamics_mismatch = 0;
  double reward_mismatch = 0;
  double value_tail = 0;
  double resampling = 0;
  double total = 0;
};

BoundBreakdown theorem_bound_terms(const BoundInputs& b);
double theorem_bound(const BoundInputs& b);

}  // namespace hrlmppi
