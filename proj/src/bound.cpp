#include "hrlmppi/bound.hpp"

namespace hrlmppi {

void BoundInputs::validate() const {
  if (gamma >= 1.0) throw ConfigError("bound: gamma must be < 1");
  if (gamma <= 0.0) throw ConfigError("bound: gamma must be > 0");
  if (horizon < 1) throw ConfigError("bound: horizon must be >= 1");
  if (rho < 0 || rho > 1) throw ConfigError("bound: rho must be in [0, 1]");
  if (alpha_p < 0 || alpha_p > 2)
    throw ConfigError("bound: alpha_p must be in [0, 2] (total variation)");
  if (alpha_r < 0) throw ConfigError("bound: alpha_r must be >= 0");
  if (d_u < 0) throw ConfigError("bound: d_u must be >= 0");
  if (lambda_max < 0) throw ConfigError("bound: lambda_max must be >= 0");
  if (span_r < 0 || span_g < 0) throw ConfigError("bound: spans must be >= 0");
}

BoundBreakdown theorem_bound_terms(const BoundInputs& b) {
  b.validate();
  const double g = b.gamma;
  const double H = static_cast<double>(b.horizon);
  BoundBreakdown out;
  out.dynamics_mismatch =
      b.rho * b.alpha_p * H * g * (1.0 - std::pow(g, H - 1.0)) / (1.0 - g) * b.span_r / 2.0;
  out.reward_mismatch = b.rho * b.alpha_r * (1.0 - std::pow(g, H)) / (1.0 - g);
  out.value_tail = b.r_max * std::pow(g, H) / (1.0 - g);
  out.resampling = b.span_g * b.d_u * std::sqrt(H / 4.0 * b.lambda_max);
  out.total = out.dynamics_mismatch + out.reward_mismatch + out.value_tail + out.resampling;
  return out;
}

double theorem_bound(const BoundInputs& b) { return theorem_bound_terms(b).total; }

}  // namespace hrlmppi
