#include "hrlmppi/influence.hpp"

#include "hrlmppi/ensemble.hpp"

namespace hrlmppi {

InfluenceUpdate update_influence(double rho, double omega_ema, double lambda,
                                 const Mat& values) {
  if (values.rows() < 1) throw EmptyBufferError("update_influence: empty batch");
  if (values.cols() < 2)
    throw DimensionError("update_influence: needs >= 2 ensemble heads");
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw ConfigError("update_influence: lambda must be in [0, 1]");
  InfluenceUpdate u;
  u.sigma2_bar = ensemble_stats(values).sigma2_bar;
  u.omega = 1.0 / (1.0 + u.sigma2_bar);
  u.omega_ema = lambda * omega_ema + (1.0 - lambda) * u.omega;
  u.eta = (1.0 - lambda) * u.omega_ema;
  u.rho = std::max(0.0, rho * (1.0 - u.eta));
  return u;
}

InfluenceUpdate apply_influence_update(InfluenceState& state, const Mat& values) {
  const InfluenceUpdate u =
      update_influence(state.rho, state.omega_ema, state.lambda, values);
  state.last_sigma2 = u.sigma2_bar;
  if (state.mode == RhoMode::kAdaptive) {
    state.rho = u.rho;
    state.omega_ema = u.omega_ema;
  }
  return u;
}

std::vector<MixedSample> mixed_minibatch(const RolloutBuffers& buffers, double rho,
                                         int batch_size, RngStream& rng,
                                         int* fallbacks) {
  if (buffers.d_rl.empty() && buffers.d_mppi.empty())
    throw EmptyBufferError("mixed_minibatch: empty buffer");
  if (fallbacks != nullptr) *fallbacks = 0;
  std::vector<MixedSample> out;
  out.reserve(batch_size);
  for (int b = 0; b < batch_size; ++b) {
    bool use_virtual = rng.uniform() < rho;
    if (use_virtual && buffers.d_mppi.empty()) {
      use_virtual = false;
      if (fallbacks != nullptr) ++*fallbacks;
    } else if (!use_virtual && buffers.d_rl.empty()) {
      use_virtual = true;
      if (fallbacks != nullptr) ++*fallbacks;
    }
    const auto n = use_virtual ? buffers.d_mppi.size() : buffers.d_rl.size();
    out.push_back({use_virtual, static_cast<std::size_t>(rng.uniform_int(
                                    static_cast<std::int64_t>(n)))});
  }
  return out;
}

double mixed_loss(double loss_rl, double loss_mppi, double rho) {
  if (!is_finite(loss_rl) || !is_finite(loss_mppi))
    throw NumericError("mixed_loss: non-finite loss");
  return (1.0 - rho) * loss_rl + rho * loss_mppi;
}

}  // namespace hrlmppi
