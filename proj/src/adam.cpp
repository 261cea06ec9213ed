#include "hrlmppi/adam.hpp"

namespace hrlmppi {

bool AdamOptimizer::step(std::span<double> params, std::span<const double> grads) {
  if (params.size() != size() || grads.size() != size())
    throw DimensionError("AdamOptimizer: size mismatch");
  for (double g : grads)
    if (!is_finite(g)) return false;
  ++t_;
  const double bc1 = 1.0 - std::pow(beta1_, t_);
  const double bc2 = 1.0 - std::pow(beta2_, t_);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * g;
    v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * g * g;
    const double mhat = m_[i] / bc1;
    const double vhat = v_[i] / bc2;
    params[i] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
  }
  return true;
}

void clip_grad_norm(std::span<double> grads, double max_norm) {
  double sq = 0;
  for (double g : grads) sq += g * g;
  const double norm = std::sqrt(sq);
  if (norm > max_norm && norm > 0) {
    const double scale = max_norm / norm;
    for (double& g : grads) g *= scale;
  }
}

}  // namespace hrlmppi
