#include "hrlmppi/mppi.hpp"

#include "hrlmppi/threadpool.hpp"

namespace hrlmppi {

void MppiConfig::validate(int control_dim) const {
  if (num_samples < 1) throw ConfigError("mppi: num_samples must be >= 1");
  if (horizon < 1) throw ConfigError("mppi: horizon must be >= 1");
  if (temperature <= 0) throw ConfigError("mppi: temperature must be > 0");
  const Vec sigma = sigma_for(control_dim);
  for (int d = 0; d < sigma.size(); ++d)
    if (!(sigma[d] > 0)) throw ConfigError("mppi: noise_sigma must be positive");
}

Vec MppiConfig::sigma_for(int control_dim) const {
  if (noise_sigma.size() == 0) return Vec::Constant(control_dim, 0.5);
  if (noise_sigma.size() == 1) return Vec::Constant(control_dim, noise_sigma[0]);
  if (noise_sigma.size() != control_dim)
    throw ConfigError("mppi: noise_sigma dimension mismatch");
  return noise_sigma;
}

std::vector<Mat> sample_perturbations(const MppiConfig& cfg, int control_dim,
                                      RngStream& rng) {
  const Vec sigma = cfg.sigma_for(control_dim);
  std::vector<Mat> eps(cfg.num_samples);
  for (int k = 0; k < cfg.num_samples; ++k) {
    Mat e(cfg.horizon, control_dim);
    for (int t = 0; t < cfg.horizon; ++t)
      for (int d = 0; d < control_dim; ++d) e(t, d) = sigma[d] * rng.gaussian();
    eps[k] = std::move(e);
  }
  return eps;
}

namespace {

SVec clamped_control(const Mat& u_nom, const Mat& eps, int t, const Vec& u_lo,
                     const Vec& u_hi) {
  const int nu = static_cast<int>(u_nom.cols());
  SVec u(nu);
  for (int d = 0; d < nu; ++d)
    u[d] = clamp(u_nom(t, d) + eps(t, d), u_lo[d], u_hi[d]);
  return u;
}

}  // namespace

RolloutResult rollout_cost(const ApproxModel& model, const CostEvaluator& cost,
                           const SVec& x0, const Mat& u_nom, const Mat& eps,
                           const DecodedAction& action, const Vec& u_lo,
                           const Vec& u_hi) {
  const int H = static_cast<int>(u_nom.rows());
  RolloutResult out;
  out.states.reserve(H + 1);
  out.states.push_back(x0);
  double j = 0;
  SVec x = x0;
  for (int t = 0; t < H; ++t) {
    const SVec u = clamped_control(u_nom, eps, t, u_lo, u_hi);
    j += cost.running(x, u, action);
    x = model.step(x, u);
    if (!all_finite(x)) {
      out.diverged = true;
      out.cost = kCostSentinel;
      return out;
    }
    out.states.push_back(x);
  }
  j += cost.terminal(x);
  out.cost = is_finite(j) ? j : kCostSentinel;
  out.diverged = !is_finite(j);
  return out;
}

Vec mppi_weights(const Vec& costs, double temperature, bool* degenerate) {
  if (costs.size() == 0) throw DimensionError("mppi_weights: empty costs");
  if (temperature <= 0) throw ConfigError("mppi_weights: temperature must be > 0");
  const double min_cost = costs.minCoeff();
  if (degenerate != nullptr) *degenerate = false;
  if (min_cost >= kCostSentinel) {
    if (degenerate != nullptr) *degenerate = true;
    return Vec::Constant(costs.size(), 1.0 / costs.size());
  }
  Vec w = ((-(costs.array() - min_cost)) / temperature).exp();
  return w / w.sum();
}

Mat mppi_update(const Mat& u_nom, const std::vector<Mat>& eps, const Vec& weights,
                const Vec& u_lo, const Vec& u_hi) {
  if (static_cast<Eigen::Index>(eps.size()) != weights.size())
    throw DimensionError("mppi_update: weights/noise size mismatch");
  Mat u_new = u_nom;
  for (std::size_t k = 0; k < eps.size(); ++k) u_new += weights[k] * eps[k];
  for (int t = 0; t < u_new.rows(); ++t)
    for (int d = 0; d < u_new.cols(); ++d)
      u_new(t, d) = clamp(u_new(t, d), u_lo[d], u_hi[d]);
  return u_new;
}

MppiPlanner::MppiPlanner(MppiConfig cfg, const ApproxModel* model,
                         CostEvaluator cost, const EnvSpec* spec, RlCostForm form)
    : cfg_(std::move(cfg)), model_(model), cost_(std::move(cost)), spec_(spec),
      form_(form) {
  cfg_.validate(model_->control_dim());
  reset();
}

void MppiPlanner::reset() {
  nominal_ = Mat::Zero(cfg_.horizon, model_->control_dim());
}

void MppiPlanner::advance(const CandidatePlan& selected) {
  const int H = cfg_.horizon;
  for (int t = 0; t + 1 < H; ++t) nominal_.row(t) = selected.controls.row(t + 1);
  nominal_.row(H - 1) = selected.controls.row(H - 1);
}

std::vector<CandidatePlan> MppiPlanner::plan(const SVec& x0,
                                             const std::vector<Vec>& actions,
                                             RngStream& rng) {
  const int M = static_cast<int>(actions.size());
  if (M < 1) throw DimensionError("mppi plan: needs at least one action");
  const int K = cfg_.num_samples;
  const int nu = model_->control_dim();

  // one shared perturbation set across all candidates
  std::vector<Mat> eps = sample_perturbations(cfg_, nu, rng);
  // fold the control box into the noise so the update law averages
  // realizable controls
  for (int k = 0; k < K; ++k)
    for (int t = 0; t < cfg_.horizon; ++t)
      for (int d = 0; d < nu; ++d)
        eps[k](t, d) = clamp(nominal_(t, d) + eps[k](t, d), spec_->u_lo[d], spec_->u_hi[d]) -
                       nominal_(t, d);

  std::vector<DecodedAction> decoded(M);
  for (int m = 0; m < M; ++m) decoded[m] = decode_action(*spec_, form_, actions[m]);

  Mat costs(M, K);
  ThreadPool::global().parallel_for(M * K, [&](int idx) {
    const int m = idx / K;
    const int k = idx % K;
    costs(m, k) = rollout_cost(*model_, cost_, x0, nominal_, eps[k], decoded[m],
                               spec_->u_lo, spec_->u_hi)
                      .cost;
  });

  const Mat zero_eps = Mat::Zero(cfg_.horizon, nu);
  std::vector<CandidatePlan> plans(M);
  for (int m = 0; m < M; ++m) {
    bool degenerate = false;
    const Vec w = mppi_weights(costs.row(m).transpose(), cfg_.temperature, &degenerate);
    if (degenerate) ++degenerate_events_;
    CandidatePlan& plan = plans[m];
    plan.controls = mppi_update(nominal_, eps, w, spec_->u_lo, spec_->u_hi);
    // one extra open-loop pass: the buffer stores the updated sequence's
    // trajectory, not a raw sample
    RolloutResult final = rollout_cost(*model_, cost_, x0, plan.controls, zero_eps,
                                       decoded[m], spec_->u_lo, spec_->u_hi);
    plan.states = std::move(final.states);
    plan.cost = final.cost;
    plan.diverged = final.diverged;
    const int steps = static_cast<int>(plan.states.size()) - 1;
    plan.rewards = Vec::Zero(cfg_.horizon);
    for (int t = 0; t < steps; ++t) {
      SVec u(nu);
      for (int d = 0; d < nu; ++d) u[d] = plan.controls(t, d);
      plan.rewards[t] = model_->reward(plan.states[t], u, plan.states[t + 1]);
    }
  }
  return plans;
}

}  // namespace hrlmppi
