#include "hrlmppi/policy.hpp"

namespace hrlmppi {

namespace {
constexpr double kLog2Pi = 1.8378770664093453;  // log(2*pi)

double softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

// log(1 - tanh(xi)^2), stable for large |xi|
double log_one_minus_tanh_sq(double xi) {
  return 2.0 * (std::log(2.0) - xi - softplus(-2.0 * xi));
}
}  // namespace

PolicyNet::PolicyNet(int obs_dim, int act_dim, const std::vector<int>& hidden,
                     Vec act_lo, Vec act_hi, RngStream& rng)
    : act_lo_(std::move(act_lo)), act_hi_(std::move(act_hi)) {
  std::vector<int> sizes;
  sizes.push_back(obs_dim);
  for (int h : hidden) sizes.push_back(h);
  sizes.push_back(act_dim);
  std::vector<double> gains(sizes.size() - 1, std::sqrt(2.0));
  gains.back() = 0.01;  // small mean head keeps early actions near the box center
  mean_net_ = Mlp(sizes, rng, gains);
  log_std_ = Vec::Zero(act_dim);
  if (act_lo_.size() != act_dim || act_hi_.size() != act_dim)
    throw DimensionError("PolicyNet: action box dimension mismatch");
}

Vec PolicyNet::clamped_log_std() const {
  return log_std_.array().max(kLogStdMin).min(kLogStdMax);
}

Vec PolicyNet::unsquash(const Vec& action) const {
  if (action.size() != act_dim()) throw DimensionError("PolicyNet: action dimension mismatch");
  Vec xi(act_dim());
  for (int d = 0; d < act_dim(); ++d) {
    const double t = 2.0 * (action[d] - act_lo_[d]) / (act_hi_[d] - act_lo_[d]) - 1.0;
    if (!(t > -1.0 && t < 1.0))
      throw NumericError("PolicyNet: action outside the open action box");
    xi[d] = std::atanh(t);
  }
  return xi;
}

std::pair<Vec, double> PolicyNet::sample(const Vec& obs, RngStream& rng) const {
  const Vec mu = mean_net_.forward(obs);
  const Vec sigma = clamped_log_std().array().exp();
  Vec action(act_dim());
  for (int d = 0; d < act_dim(); ++d) {
    const double xi = mu[d] + sigma[d] * rng.gaussian();
    action[d] = act_lo_[d] + (act_hi_[d] - act_lo_[d]) * 0.5 * (std::tanh(xi) + 1.0);
  }
  return {action, log_prob(obs, action)};
}

Vec PolicyNet::mean_action(const Vec& obs) const {
  const Vec mu = mean_net_.forward(obs);
  Vec action(act_dim());
  for (int d = 0; d < act_dim(); ++d)
    action[d] = act_lo_[d] + (act_hi_[d] - act_lo_[d]) * 0.5 * (std::tanh(mu[d]) + 1.0);
  return action;
}

double PolicyNet::log_prob(const Vec& obs, const Vec& action) const {
  const Vec mu = mean_net_.forward(obs);
  const Vec log_std = clamped_log_std();
  const Vec xi = unsquash(action);
  double lp = 0;
  for (int d = 0; d < act_dim(); ++d) {
    const double sigma = std::exp(log_std[d]);
    const double z = (xi[d] - mu[d]) / sigma;
    lp += -0.5 * z * z - log_std[d] - 0.5 * kLog2Pi;
    lp -= log_one_minus_tanh_sq(xi[d]);
    lp -= std::log(0.5 * (act_hi_[d] - act_lo_[d]));
  }
  return lp;
}

double PolicyNet::entropy() const {
  const Vec log_std = clamped_log_std();
  return act_dim() * 0.5 * (kLog2Pi + 1.0) + log_std.sum();
}

Vec PolicyNet::log_prob_batch(const Mat& obs, const Mat& actions, BatchCache& cache) const {
  const auto B = obs.rows();
  if (actions.rows() != B || actions.cols() != act_dim())
    throw DimensionError("PolicyNet: batch action shape mismatch");
  cache.mean = mean_net_.forward_batch(obs, cache.mean_cache);
  const Vec log_std = clamped_log_std();
  cache.sigma = log_std.array().exp();
  cache.clamp_active = Vec::Ones(act_dim());
  for (int d = 0; d < act_dim(); ++d)
    if (log_std_[d] <= kLogStdMin || log_std_[d] >= kLogStdMax) cache.clamp_active[d] = 0;
  cache.xi.resize(B, act_dim());
  Vec lp = Vec::Zero(B);
  for (Eigen::Index b = 0; b < B; ++b) {
    for (int d = 0; d < act_dim(); ++d) {
      const double t = 2.0 * (actions(b, d) - act_lo_[d]) / (act_hi_[d] - act_lo_[d]) - 1.0;
      if (!(t > -1.0 && t < 1.0))
        throw NumericError("PolicyNet: action outside the open action box");
      const double xi = std::atanh(t);
      cache.xi(b, d) = xi;
      const double z = (xi - cache.mean(b, d)) / cache.sigma[d];
      lp[b] += -0.5 * z * z - log_std[d] - 0.5 * kLog2Pi;
      lp[b] -= log_one_minus_tanh_sq(xi);
      lp[b] -= std::log(0.5 * (act_hi_[d] - act_lo_[d]));
    }
  }
  return lp;
}

void PolicyNet::backward_batch(const BatchCache& cache, const Vec& dlogp,
                               double dentropy, std::span<double> grad) const {
  const auto B = cache.mean.rows();
  if (dlogp.size() != B) throw DimensionError("PolicyNet backward: dlogp size mismatch");
  const std::size_t mean_n = mean_net_.param_count();
  if (grad.size() != param_count()) throw DimensionError("PolicyNet backward: grad size mismatch");

  // d logp / d mu = (xi - mu) / sigma^2, scaled by the incoming dL/dlogp.
  Mat dmu(B, act_dim());
  Eigen::Map<Vec> dlog_std(grad.data() + mean_n, act_dim());
  for (Eigen::Index b = 0; b < B; ++b) {
    for (int d = 0; d < act_dim(); ++d) {
      const double z = (cache.xi(b, d) - cache.mean(b, d)) / cache.sigma[d];
      dmu(b, d) = dlogp[b] * z / cache.sigma[d];
      if (cache.clamp_active[d] != 0)
        dlog_std[d] += dlogp[b] * (z * z - 1.0);
    }
  }
  // dH/d(log_std_d) = 1 inside the clamp; entropy is state-independent.
  for (int d = 0; d < act_dim(); ++d)
    if (cache.clamp_active[d] != 0) dlog_std[d] += dentropy;
  mean_net_.backward_batch(cache.mean_cache, dmu, grad.subspan(0, mean_n));
}

void PolicyNet::get_params(std::span<double> out) const {
  if (out.size() != param_count()) throw DimensionError("PolicyNet get_params: size mismatch");
  mean_net_.get_params(out.subspan(0, mean_net_.param_count()));
  std::copy(log_std_.data(), log_std_.data() + log_std_.size(),
            out.data() + mean_net_.param_count());
}

void PolicyNet::set_params(std::span<const double> in) {
  if (in.size() != param_count()) throw DimensionError("PolicyNet set_params: size mismatch");
  mean_net_.set_params(in.subspan(0, mean_net_.param_count()));
  std::copy(in.data() + mean_net_.param_count(), in.data() + in.size(), log_std_.data());
}

}  // namespace hrlmppi
