#pragma once

#include <span>

#include "hrlmppi/adam.hpp"
#include "hrlmppi/ensemble.hpp"
#include "hrlmppi/gae.hpp"
#include "hrlmppi/influence.hpp"
#include "hrlmppi/policy.hpp"
#include "hrlmppi/types.hpp"

namespace hrlmppi {

struct PpoConfig {
  double learning_rate = 3e-4;
  int n_steps = 2048;
  int batch_size = 64;
  int n_epochs = 10;
  double gamma = 0.99;
  double gae_lambda = 0.95;
  double clip_range = 0.2;
  double ent_coef = 0.0;
  double vf_coef = 0.5;
  double max_grad_norm = 0.5;

  void validate() const;
};

struct SampleBatch {
  Mat obs;      // B x obs_dim
  Mat actions;  // B x act_dim
  Vec logp_old;
  Vec advantages;
  Vec targets;  // value regression targets
};

struct PpoLosses {
  double actor = 0;
  double value = 0;
  double entropy_loss = 0;  // -E[H]
  int skipped = 0;          // samples with a non-finite importance ratio

  double total(const PpoConfig& cfg) const {
    return actor + cfg.vf_coef * value + cfg.ent_coef * entropy_loss;
  }
};

// Clipped-surrogate actor loss, ensemble value regression (mean over heads)
// and the entropy bonus, forward only. Advantages are normalized per batch
// unless disabled.
PpoLosses ppo_losses(const PolicyNet& policy, const ValueEnsemble& ensemble,
                     const SampleBatch& batch, const PpoConfig& cfg,
                     bool normalize_advantages = true);

// Same, accumulating weight * d(total loss)/d(params) into `grad`
// (policy params followed by ensemble params).
PpoLosses ppo_loss_grad(const PolicyNet& policy, const ValueEnsemble& ensemble,
                        const SampleBatch& batch, const PpoConfig& cfg,
                        double weight, std::span<double> grad,
                        bool normalize_advantages = true);

struct UpdateStats {
  int n_rl = 0;
  int n_mppi = 0;
  double rho = 0;
  double sigma2 = 0;
  double actor_loss = 0;
  double value_loss = 0;
  double entropy = 0;
  int skipped_samples = 0;
  int minibatches = 0;
  int adam_aborts = 0;
  int fallback_draws = 0;
  bool empty_virtual_warning = false;
};

// One full update period: GAE over the real buffer, fresh virtual
// advantages against stored targets, influence-ratio refresh, epochs of
// minibatch steps under the active mixing application, then buffer reset.
UpdateStats ppo_update(PolicyNet& policy, ValueEnsemble& ensemble,
                       AdamOptimizer& optimizer, RolloutBuffers& buffers,
                       InfluenceState& influence, const PpoConfig& cfg,
                       RngStream& rng);

}  // namespace hrlmppi
