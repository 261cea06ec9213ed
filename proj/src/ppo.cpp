#include "hrlmppi/ppo.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace hrlmppi {

void PpoConfig::validate() const {
  if (learning_rate <= 0) throw ConfigError("ppo: learning_rate must be > 0");
  if (n_steps < 1) throw ConfigError("ppo: n_steps must be >= 1");
  if (batch_size < 1) throw ConfigError("ppo: batch_size must be >= 1");
  if (n_epochs < 1) throw ConfigError("ppo: n_epochs must be >= 1");
  if (!(gamma > 0 && gamma <= 1)) throw ConfigError("ppo: gamma must be in (0, 1]");
  if (!(gae_lambda > 0 && gae_lambda <= 1))
    throw ConfigError("ppo: gae_lambda must be in (0, 1]");
  if (clip_range <= 0) throw ConfigError("ppo: clip_range must be > 0");
  if (ent_coef < 0) throw ConfigError("ppo: ent_coef must be >= 0");
  if (vf_coef < 0) throw ConfigError("ppo: vf_coef must be >= 0");
}

namespace {

Vec normalized_advantages(const Vec& adv, bool enable) {
  const auto B = adv.size();
  if (!enable || B < 2) return adv;
  const double mean = adv.mean();
  const double std = std::sqrt((adv.array() - mean).square().sum() / B);
  return (adv.array() - mean) / (std + 1e-8);
}

struct LossWork {
  PpoLosses losses;
  Vec dlogp;  // per-sample dL_actor/dlogp (zero when not needed)
  Mat dV;     // per-sample/head dL_value/dV
};

LossWork loss_forward(const PolicyNet& policy, PolicyNet::BatchCache& pcache,
                      const ValueEnsemble& ensemble, ValueEnsemble::BatchCache& vcache,
                      const SampleBatch& batch, const PpoConfig& cfg,
                      bool normalize_advantages, bool with_grad) {
  const auto B = batch.obs.rows();
  if (batch.actions.rows() != B || batch.logp_old.size() != B ||
      batch.advantages.size() != B || batch.targets.size() != B)
    throw DimensionError("ppo_losses: batch field length mismatch");

  LossWork w;
  const Vec adv = normalized_advantages(batch.advantages, normalize_advantages);
  const Vec logp_new = policy.log_prob_batch(batch.obs, batch.actions, pcache);

  w.dlogp = Vec::Zero(B);
  double actor_sum = 0;
  int valid = 0;
  const double eps = cfg.clip_range;
  for (Eigen::Index b = 0; b < B; ++b) {
    const double ratio = std::exp(logp_new[b] - batch.logp_old[b]);
    if (!is_finite(ratio)) {
      ++w.losses.skipped;
      continue;
    }
    ++valid;
    const double unclipped = ratio * adv[b];
    const double clipped = clamp(ratio, 1.0 - eps, 1.0 + eps) * adv[b];
    if (unclipped <= clipped) {
      actor_sum += unclipped;
      w.dlogp[b] = ratio * adv[b];  // d(ratio*adv)/dlogp
    } else {
      actor_sum += clipped;
      // the clip saturates outside [1-eps, 1+eps]; inside, both branches agree
      if (ratio > 1.0 - eps && ratio < 1.0 + eps) w.dlogp[b] = ratio * adv[b];
    }
  }
  if (valid > 0) {
    w.losses.actor = -actor_sum / valid;
    w.dlogp *= -1.0 / valid;
  }

  const Mat values = ensemble.values_batch(batch.obs, vcache);
  const int D = static_cast<int>(values.cols());
  const Mat err = values.colwise() - batch.targets;
  w.losses.value = err.array().square().sum() / (static_cast<double>(B) * D);
  if (with_grad) w.dV = 2.0 * err / (static_cast<double>(B) * D);

  w.losses.entropy_loss = -policy.entropy();
  return w;
}

}  // namespace

PpoLosses ppo_losses(const PolicyNet& policy, const ValueEnsemble& ensemble,
                     const SampleBatch& batch, const PpoConfig& cfg,
                     bool normalize_advantages) {
  PolicyNet::BatchCache pcache;
  ValueEnsemble::BatchCache vcache;
  return loss_forward(policy, pcache, ensemble, vcache, batch, cfg,
                      normalize_advantages, false)
      .losses;
}

PpoLosses ppo_loss_grad(const PolicyNet& policy, const ValueEnsemble& ensemble,
                        const SampleBatch& batch, const PpoConfig& cfg,
                        double weight, std::span<double> grad,
                        bool normalize_advantages) {
  const std::size_t pn = policy.param_count();
  const std::size_t vn = ensemble.param_count();
  if (grad.size() != pn + vn) throw DimensionError("ppo_loss_grad: grad size mismatch");

  PolicyNet::BatchCache pcache;
  ValueEnsemble::BatchCache vcache;
  LossWork w = loss_forward(policy, pcache, ensemble, vcache, batch, cfg,
                            normalize_advantages, true);

  policy.backward_batch(pcache, weight * w.dlogp, weight * cfg.ent_coef * (-1.0),
                        grad.subspan(0, pn));
  ensemble.backward_batch(vcache, (weight * cfg.vf_coef) * w.dV, grad.subspan(pn, vn));
  return w.losses;
}

namespace {

SampleBatch gather_real(const RolloutBuffers& buffers, const Vec& adv,
                        const Vec& targets, const std::vector<int>& idx) {
  const auto& d = buffers.d_rl;
  SampleBatch b;
  const int B = static_cast<int>(idx.size());
  b.obs.resize(B, d.front().obs.size());
  b.actions.resize(B, d.front().action.size());
  b.logp_old.resize(B);
  b.advantages.resize(B);
  b.targets.resize(B);
  for (int i = 0; i < B; ++i) {
    const auto& t = d[idx[i]];
    b.obs.row(i) = t.obs.transpose();
    b.actions.row(i) = t.action.transpose();
    b.logp_old[i] = t.log_pi_old;
    b.advantages[i] = adv[idx[i]];
    b.targets[i] = targets[idx[i]];
  }
  return b;
}

SampleBatch gather_virtual(const RolloutBuffers& buffers, const Vec& adv,
                           const std::vector<int>& idx) {
  const auto& d = buffers.d_mppi;
  SampleBatch b;
  const int B = static_cast<int>(idx.size());
  b.obs.resize(B, d.front().obs.size());
  b.actions.resize(B, d.front().action.size());
  b.logp_old.resize(B);
  b.advantages.resize(B);
  b.targets.resize(B);
  for (int i = 0; i < B; ++i) {
    const auto& t = d[idx[i]];
    b.obs.row(i) = t.obs.transpose();
    b.actions.row(i) = t.action.transpose();
    b.logp_old[i] = t.log_pi_old;
    b.advantages[i] = adv[idx[i]];
    b.targets[i] = t.v_target;
  }
  return b;
}

SampleBatch gather_mixed(const RolloutBuffers& buffers, const Vec& adv_rl,
                         const Vec& targets_rl, const Vec& adv_v,
                         const std::vector<MixedSample>& samples) {
  SampleBatch b;
  const int B = static_cast<int>(samples.size());
  const Vec& obs0 = buffers.d_rl.empty() ? buffers.d_mppi.front().obs
                                         : buffers.d_rl.front().obs;
  const Vec& act0 = buffers.d_rl.empty() ? buffers.d_mppi.front().action
                                         : buffers.d_rl.front().action;
  b.obs.resize(B, obs0.size());
  b.actions.resize(B, act0.size());
  b.logp_old.resize(B);
  b.advantages.resize(B);
  b.targets.resize(B);
  for (int i = 0; i < B; ++i) {
    const auto& s = samples[i];
    if (s.from_virtual) {
      const auto& t = buffers.d_mppi[s.index];
      b.obs.row(i) = t.obs.transpose();
      b.actions.row(i) = t.action.transpose();
      b.logp_old[i] = t.log_pi_old;
      b.advantages[i] = adv_v[s.index];
      b.targets[i] = t.v_target;
    } else {
      const auto& t = buffers.d_rl[s.index];
      b.obs.row(i) = t.obs.transpose();
      b.actions.row(i) = t.action.transpose();
      b.logp_old[i] = t.log_pi_old;
      b.advantages[i] = adv_rl[s.index];
      b.targets[i] = targets_rl[s.index];
    }
  }
  return b;
}

Mat stack_obs(const std::vector<Transition>& d) {
  Mat m(d.size(), d.front().obs.size());
  for (std::size_t i = 0; i < d.size(); ++i) m.row(i) = d[i].obs.transpose();
  return m;
}

Mat stack_obs(const std::vector<VirtualTransition>& d) {
  Mat m(d.size(), d.front().obs.size());
  for (std::size_t i = 0; i < d.size(); ++i) m.row(i) = d[i].obs.transpose();
  return m;
}

}  // namespace

UpdateStats ppo_update(PolicyNet& policy, ValueEnsemble& ensemble,
                       AdamOptimizer& optimizer, RolloutBuffers& buffers,
                       InfluenceState& influence, const PpoConfig& cfg,
                       RngStream& rng) {
  cfg.validate();
  if (buffers.d_rl.empty()) throw EmptyBufferError("ppo_update: empty real buffer");

  UpdateStats stats;
  const int n_rl = static_cast<int>(buffers.d_rl.size());
  const int n_mppi = static_cast<int>(buffers.d_mppi.size());
  stats.n_rl = n_rl;
  stats.n_mppi = n_mppi;

  // real-data GAE under the current value ensemble
  const Mat obs_rl = stack_obs(buffers.d_rl);
  const Vec values_rl = ensemble.mean_values_batch(obs_rl);
  Vec rewards(n_rl);
  std::vector<bool> dones(n_rl);
  for (int i = 0; i < n_rl; ++i) {
    rewards[i] = buffers.d_rl[i].reward;
    dones[i] = buffers.d_rl[i].done;
  }
  const double bootstrap =
      buffers.d_rl.back().done ? 0.0 : ensemble.value(buffers.d_rl.back().obs_next);
  const GaeResult gae =
      compute_gae(rewards, values_rl, dones, cfg.gamma, cfg.gae_lambda, bootstrap);

  // virtual advantages stay fresh: stored target minus the current value
  Mat obs_v;
  Vec adv_v;
  if (n_mppi > 0) {
    obs_v = stack_obs(buffers.d_mppi);
    const Vec values_v = ensemble.mean_values_batch(obs_v);
    adv_v.resize(n_mppi);
    for (int i = 0; i < n_mppi; ++i)
      adv_v[i] = buffers.d_mppi[i].v_target - values_v[i];
  }

  const int B = cfg.batch_size;
  auto uniform_indices = [&](int n, int count) {
    std::vector<int> idx(count);
    for (int i = 0; i < count; ++i) idx[i] = static_cast<int>(rng.uniform_int(n));
    return idx;
  };

  // influence refresh on this update's first sampled minibatch (Alg. order:
  // sample, update rho, then build the loss)
  {
    Mat probe_obs;
    if (influence.application == MixApplication::kDistribution && n_mppi > 0) {
      const auto samples = mixed_minibatch(buffers, influence.rho, B, rng);
      probe_obs.resize(B, obs_rl.cols());
      for (int i = 0; i < B; ++i)
        probe_obs.row(i) = samples[i].from_virtual
                               ? buffers.d_mppi[samples[i].index].obs.transpose()
                               : buffers.d_rl[samples[i].index].obs.transpose();
    } else {
      const auto ridx = uniform_indices(n_rl, std::min(B, n_rl));
      const auto vidx = n_mppi > 0 ? uniform_indices(n_mppi, std::min(B, n_mppi))
                                   : std::vector<int>{};
      probe_obs.resize(ridx.size() + vidx.size(), obs_rl.cols());
      for (std::size_t i = 0; i < ridx.size(); ++i)
        probe_obs.row(i) = buffers.d_rl[ridx[i]].obs.transpose();
      for (std::size_t i = 0; i < vidx.size(); ++i)
        probe_obs.row(ridx.size() + i) = buffers.d_mppi[vidx[i]].obs.transpose();
    }
    apply_influence_update(influence, ensemble.values_batch(probe_obs));
  }
  stats.rho = influence.rho;
  stats.sigma2 = influence.last_sigma2;

  const std::size_t n_params = policy.param_count() + ensemble.param_count();
  std::vector<double> grad(n_params);
  std::vector<double> params(n_params);
  auto run_step = [&](const std::function<PpoLosses()>& accumulate) {
    std::fill(grad.begin(), grad.end(), 0.0);
    const PpoLosses losses = accumulate();
    clip_grad_norm(grad, cfg.max_grad_norm);
    policy.get_params(std::span<double>(params).subspan(0, policy.param_count()));
    ensemble.get_params(std::span<double>(params).subspan(policy.param_count()));
    if (optimizer.step(params, grad)) {
      policy.set_params(std::span<const double>(params).subspan(0, policy.param_count()));
      ensemble.set_params(std::span<const double>(params).subspan(policy.param_count()));
    } else {
      ++stats.adam_aborts;
    }
    stats.actor_loss += losses.actor;
    stats.value_loss += losses.value;
    stats.entropy += -losses.entropy_loss;
    stats.skipped_samples += losses.skipped;
    ++stats.minibatches;
  };

  std::vector<int> perm(n_rl);
  std::iota(perm.begin(), perm.end(), 0);

  for (int epoch = 0; epoch < cfg.n_epochs; ++epoch) {
    if (influence.application == MixApplication::kLossWeighting) {
      // shuffle the real buffer; virtual minibatches are drawn uniformly
      for (int i = n_rl - 1; i > 0; --i)
        std::swap(perm[i], perm[static_cast<int>(rng.uniform_int(i + 1))]);
      for (int start = 0; start < n_rl; start += B) {
        const int count = std::min(B, n_rl - start);
        const std::vector<int> chunk(perm.begin() + start, perm.begin() + start + count);
        const SampleBatch real_batch =
            gather_real(buffers, gae.advantages, gae.value_targets, chunk);
        const double rho = influence.rho;
        run_step([&]() {
          PpoLosses total = ppo_loss_grad(policy, ensemble, real_batch, cfg,
                                          1.0 - rho, grad);
          PpoLosses scaled;
          scaled.actor = (1.0 - rho) * total.actor;
          scaled.value = (1.0 - rho) * total.value;
          scaled.entropy_loss = (1.0 - rho) * total.entropy_loss;
          scaled.skipped = total.skipped;
          if (rho > 0 && n_mppi > 0) {
            const SampleBatch virt_batch =
                gather_virtual(buffers, adv_v, uniform_indices(n_mppi, count));
            const PpoLosses lv =
                ppo_loss_grad(policy, ensemble, virt_batch, cfg, rho, grad);
            scaled.actor += rho * lv.actor;
            scaled.value += rho * lv.value;
            scaled.entropy_loss += rho * lv.entropy_loss;
            scaled.skipped += lv.skipped;
          } else if (rho > 0 && n_mppi == 0) {
            stats.empty_virtual_warning = true;  // L_MPPI treated as zero
          }
          return scaled;
        });
      }
    } else {
      const int iterations = (n_rl + B - 1) / B;
      for (int it = 0; it < iterations; ++it) {
        int fallbacks = 0;
        const auto samples = mixed_minibatch(buffers, influence.rho, B, rng, &fallbacks);
        stats.fallback_draws += fallbacks;
        const SampleBatch batch =
            gather_mixed(buffers, gae.advantages, gae.value_targets, adv_v, samples);
        run_step([&]() { return ppo_loss_grad(policy, ensemble, batch, cfg, 1.0, grad); });
      }
    }
  }

  if (stats.minibatches > 0) {
    stats.actor_loss /= stats.minibatches;
    stats.value_loss /= stats.minibatches;
    stats.entropy /= stats.minibatches;
  }
  buffers.clear();  // on-policy contract
  return stats;
}

}  // namespace hrlmppi
