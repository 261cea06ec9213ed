#pragma once

#include <string>

#include "hrlmppi/ensemble.hpp"
#include "hrlmppi/env.hpp"

namespace hrlmppi {

// RL term of the planner's running cost; the value-terminal variant appends
// the negated ensemble value of the horizon state as a terminal cost.
enum class RlCostForm {
  kTracking,
  kQuadratic,
  kValueTerminal,
  kTrackingValue,
  kQuadraticValue,
};

RlCostForm parse_rl_cost_form(const std::string& s);
std::string to_string(RlCostForm form);
bool form_has_tracking(RlCostForm form);
bool form_has_quadratic(RlCostForm form);
bool form_has_value(RlCostForm form);

struct CostConfig {
  RlCostForm form = RlCostForm::kTracking;
  double w_rl = 0, w_danger = 0;
  double w_act = 0, w_y = 0;       // lander
  double w_bound = 0, w_coll = 0;  // racing
};

// Dimension of the high-level action for a given env/cost form.
int action_dim_for(const EnvSpec& spec, RlCostForm form);

// High-level action decoded into cost parameters. The quadratic form reads
// diag(Q) through a softplus so Q stays PSD.
struct DecodedAction {
  Vec target;  // tracking target
  Vec q_diag;  // quadratic weights over (qp_state, u)
  Vec p;       // linear term
};
DecodedAction decode_action(const EnvSpec& spec, RlCostForm form, const Vec& a);

double cost_rl_track(const ApproxModel& model, const SVec& x, const Vec& target);
double cost_rl_quad(const ApproxModel& model, const SVec& x, const SVec& u,
                    const Vec& q_diag, const Vec& p);
// Value form used as a cost: the negated ensemble-mean value at psi(x).
double cost_rl_value(const ValueEnsemble& ensemble, const ApproxModel& model,
                     const SVec& x);
double cost_danger(const Eigen::Vector2d& pos, const DangerZone& zone);
double cost_other_lander(const SVec& x, const SVec& u, double w_y, double w_act);
double cost_other_racing(const SVec& x, const Track& track,
                         const Eigen::Vector2d& opponent, double d_contact,
                         double w_bound, double w_coll);

// Bound view of the full decomposed running/terminal cost for one candidate
// action. Pure; shared read-only across parallel rollouts.
class CostEvaluator {
 public:
  CostEvaluator(const CostConfig* cfg, const ApproxModel* model,
                const DangerZone* zone, const ValueEnsemble* ensemble)
      : cfg_(cfg), model_(model), zone_(zone), ensemble_(ensemble) {}

  double running(const SVec& x, const SVec& u, const DecodedAction& a) const;
  double terminal(const SVec& x_horizon) const;
  const CostConfig& config() const { return *cfg_; }

 private:
  const CostConfig* cfg_;
  const ApproxModel* model_;
  const DangerZone* zone_;
  const ValueEnsemble* ensemble_;  // required only by value-terminal forms
};

}  // namespace hrlmppi
