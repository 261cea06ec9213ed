#include "hrlmppi/cost.hpp"

#include "hrlmppi/track.hpp"

namespace hrlmppi {

RlCostForm parse_rl_cost_form(const std::string& s) {
  if (s == "tracking") return RlCostForm::kTracking;
  if (s == "quadratic") return RlCostForm::kQuadratic;
  if (s == "value-terminal") return RlCostForm::kValueTerminal;
  if (s == "tracking+value-terminal") return RlCostForm::kTrackingValue;
  if (s == "quadratic+value-terminal") return RlCostForm::kQuadraticValue;
  throw ConfigError("unknown rl cost form: " + s);
}

std::string to_string(RlCostForm form) {
  switch (form) {
    case RlCostForm::kTracking: return "tracking";
    case RlCostForm::kQuadratic: return "quadratic";
    case RlCostForm::kValueTerminal: return "value-terminal";
    case RlCostForm::kTrackingValue: return "tracking+value-terminal";
    case RlCostForm::kQuadraticValue: return "quadratic+value-terminal";
  }
  return "tracking";
}

bool form_has_tracking(RlCostForm form) {
  return form == RlCostForm::kTracking || form == RlCostForm::kTrackingValue;
}
bool form_has_quadratic(RlCostForm form) {
  return form == RlCostForm::kQuadratic || form == RlCostForm::kQuadraticValue;
}
bool form_has_value(RlCostForm form) {
  return form == RlCostForm::kValueTerminal || form == RlCostForm::kTrackingValue ||
         form == RlCostForm::kQuadraticValue;
}

int action_dim_for(const EnvSpec& spec, RlCostForm form) {
  if (form_has_quadratic(form)) return 2 * (spec.qp_state_dim + spec.control_dim);
  return 2;  // tracking targets; the pure value form keeps the same interface
}

namespace {
double softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }
}

DecodedAction decode_action(const EnvSpec& spec, RlCostForm form, const Vec& a) {
  DecodedAction d;
  if (a.size() != action_dim_for(spec, form))
    throw DimensionError("decode_action: action dimension mismatch");
  if (form_has_quadratic(form)) {
    const int n = spec.qp_state_dim + spec.control_dim;
    d.q_diag = Vec(n);
    d.p = Vec(n);
    for (int i = 0; i < n; ++i) {
      d.q_diag[i] = softplus(2.0 * a[i]);
      d.p[i] = a[n + i];
    }
  } else {
    d.target = spec.target_scale.cwiseProduct(a.head(2));
  }
  return d;
}

double cost_rl_track(const ApproxModel& model, const SVec& x, const Vec& target) {
  return model.tracking_error(x, target);
}

double cost_rl_quad(const ApproxModel& model, const SVec& x, const SVec& u,
                    const Vec& q_diag, const Vec& p) {
  const SVec xs = model.qp_state(x);
  const int n = static_cast<int>(xs.size() + u.size());
  if (q_diag.size() != n || p.size() != n)
    throw DimensionError("cost_rl_quad: parameter dimension mismatch");
  double c = 0;
  for (int i = 0; i < xs.size(); ++i) c += q_diag[i] * xs[i] * xs[i] + p[i] * xs[i];
  for (int i = 0; i < u.size(); ++i) {
    const int j = static_cast<int>(xs.size()) + i;
    c += q_diag[j] * u[i] * u[i] + p[j] * u[i];
  }
  return c;
}

double cost_rl_value(const ValueEnsemble& ensemble, const ApproxModel& model,
                     const SVec& x) {
  return -ensemble.value(model.observe(x));
}

double cost_danger(const Eigen::Vector2d& pos, const DangerZone& zone) {
  return zone.contains(pos.x(), pos.y()) ? 1.0 : 0.0;
}

double cost_other_lander(const SVec& x, const SVec& u, double w_y, double w_act) {
  return w_y * x[1] * x[1] + w_act * u.squaredNorm();
}

double cost_other_racing(const SVec& x, const Track& track,
                         const Eigen::Vector2d& opponent, double d_contact,
                         double w_bound, double w_coll) {
  const Eigen::Vector2d p{x[0], x[1]};
  const double coll = (p - opponent).norm() <= d_contact ? 1.0 : 0.0;
  const double over = std::max(0.0, track.boundary_proportion(p) - 1.0);
  return w_coll * coll + w_bound * over * over;
}

double CostEvaluator::running(const SVec& x, const SVec& u, const DecodedAction& a) const {
  double c = 0;
  if (form_has_tracking(cfg_->form))
    c += cfg_->w_rl * cost_rl_track(*model_, x, a.target);
  else if (form_has_quadratic(cfg_->form))
    c += cfg_->w_rl * cost_rl_quad(*model_, x, u, a.q_diag, a.p);
  c += cfg_->w_danger * cost_danger(model_->position(x), *zone_);
  c += model_->other_cost(x, u, cfg_->w_y, cfg_->w_act, cfg_->w_bound, cfg_->w_coll);
  return c;
}

double CostEvaluator::terminal(const SVec& x_horizon) const {
  if (!form_has_value(cfg_->form)) return 0;
  if (ensemble_ == nullptr)
    throw ConfigError("value-terminal cost form needs a value ensemble");
  return cfg_->w_rl * cost_rl_value(*ensemble_, *model_, x_horizon);
}

}  // namespace hrlmppi
