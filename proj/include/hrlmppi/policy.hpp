#pragma once

#include <span>
#include <utility>
#include <vector>

#include "hrlmppi/mlp.hpp"
#include "hrlmppi/rng.hpp"

namespace hrlmppi {

// Diagonal-Gaussian policy with a tanh squash onto the action box.
// The mean comes from an Mlp (tanh trunk + linear head); log-std is a free
// per-dimension parameter clamped to [-5, 2]. Log-probabilities include the
// squash correction so stored tuples stay consistent under re-evaluation.
class PolicyNet {
 public:
  PolicyNet() = default;
  PolicyNet(int obs_dim, int act_dim, const std::vector<int>& hidden,
            Vec act_lo, Vec act_hi, RngStream& rng);

  int obs_dim() const { return mean_net_.in_dim(); }
  int act_dim() const { return mean_net_.out_dim(); }
  const Vec& act_lo() const { return act_lo_; }
  const Vec& act_hi() const { return act_hi_; }

  std::pair<Vec, double> sample(const Vec& obs, RngStream& rng) const;
  Vec mean_action(const Vec& obs) const;  // deterministic (evaluation)

  double log_prob(const Vec& obs, const Vec& action) const;
  // Per-sample entropy of the pre-squash Gaussian (state-independent).
  double entropy() const;

  struct BatchCache {
    Mlp::BatchCache mean_cache;
    Mat mean;      // B x act
    Mat xi;        // recovered pre-squash actions
    Vec sigma;     // act
    Vec clamp_active;  // 1 inside the log-std clamp, 0 at the rails
  };
  // Log-prob of given actions at given observations, row-wise.
  Vec log_prob_batch(const Mat& obs, const Mat& actions, BatchCache& cache) const;

  // Accumulates d(loss)/d(params) given per-sample dL/dlogp and the total
  // dL/d(entropy) coefficient. Layout: mean net params, then log-std.
  void backward_batch(const BatchCache& cache, const Vec& dlogp,
                      double dentropy, std::span<double> grad) const;

  std::size_t param_count() const { return mean_net_.param_count() + log_std_.size(); }
  void get_params(std::span<double> out) const;
  void set_params(std::span<const double> in);

  const Mlp& mean_net() const { return mean_net_; }

  static constexpr double kLogStdMin = -5.0;
  static constexpr double kLogStdMax = 2.0;

 private:
  Vec clamped_log_std() const;
  // Pre-squash value for an in-box action; throws outside the open box.
  Vec unsquash(const Vec& action) const;

  Mlp mean_net_;
  Vec log_std_;
  Vec act_lo_, act_hi_;
};

}  // namespace hrlmppi
