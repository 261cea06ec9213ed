#pragma once

#include <vector>

#include "hrlmppi/rng.hpp"
#include "hrlmppi/types.hpp"

namespace hrlmppi {

enum class RhoMode { kFixed, kAdaptive };
enum class MixApplication { kLossWeighting, kDistribution };

// Influence ratio between real and virtual data, with the EMA state of the
// uncertainty-driven annealing schedule. rho never increases in adaptive
// mode and is clamped at zero.
struct InfluenceState {
  double rho = 0.3;
  double omega_ema = 0;  // Omega_t
  double lambda = 0.99;
  double rho0 = 0.3;
  double omega0 = 0;
  RhoMode mode = RhoMode::kFixed;
  MixApplication application = MixApplication::kLossWeighting;
  double last_sigma2 = 0;  // diagnostics, refreshed every update
};

struct InfluenceUpdate {
  double sigma2_bar = 0;  // batch-mean per-sample ensemble variance
  double omega = 0;       // instantaneous score 1 / (1 + sigma2)
  double omega_ema = 0;   // Omega_{t+1}
  double eta = 0;         // update rate (1 - lambda) * Omega_{t+1}
  double rho = 0;         // rho_{t+1}
};

// One annealing step from a batch-by-ensemble value matrix. lambda is
// accepted on [0, 1]; lambda = 1 freezes rho exactly. Requires D >= 2.
InfluenceUpdate update_influence(double rho, double omega_ema, double lambda,
                                 const Mat& values);

// Applies the update in place when the state is adaptive; always refreshes
// the diagnostics.
InfluenceUpdate apply_influence_update(InfluenceState& state, const Mat& values);

struct MixedSample {
  bool from_virtual = false;
  std::size_t index = 0;
};

// B indices drawn per the Bernoulli(rho) scheme: virtual buffer with
// probability rho, real buffer otherwise, uniform within the chosen buffer.
// An empty required buffer falls back to the other side; *fallbacks counts
// those draws. Errors when both buffers are empty.
std::vector<MixedSample> mixed_minibatch(const RolloutBuffers& buffers, double rho,
                                         int batch_size, RngStream& rng,
                                         int* fallbacks = nullptr);

// Convex combination of the per-buffer losses.
double mixed_loss(double loss_rl, double loss_mppi, double rho);

}  // namespace hrlmppi
