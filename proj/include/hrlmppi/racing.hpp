#pragma once

#include "hrlmppi/env.hpp"
#include "hrlmppi/track.hpp"

namespace hrlmppi {

// Planar racing on a closed track with one centerline-following opponent.
// The environment integrates a bicycle with quadratic drag and first-order
// steering lag; the planner model is the plain kinematic bicycle.
namespace racing {

constexpr double kDt = 0.1;
constexpr double kWheelbase = 2.5;
constexpr double kMaxSteer = 0.5;
constexpr double kMaxAccel = 4.0;
constexpr double kMaxSpeed = 20.0;
constexpr double kDrag = 0.015;      // env only
constexpr double kSteerTau = 0.25;   // env only
constexpr double kOpponentSpeed = 7.0;
constexpr double kOpponentStart = 20.0;
constexpr double kContactDist = 2.0;
constexpr double kNearDist = 10.0;
constexpr double kGoalArc = 250.0;
constexpr double kProgressCoef = 1.0;
constexpr double kBoundaryCoef = 0.5;

}  // namespace racing

// Model state: (x, y, psi, v, opponent arc, ego progress).
class RacingModel : public ApproxModel {
 public:
  RacingModel(const Track* track, const DangerZone* zone, double passing_coef)
      : track_(track), zone_(zone), passing_coef_(passing_coef) {}
  int state_dim() const override { return 6; }
  int control_dim() const override { return 2; }
  SVec step(const SVec& x, const SVec& u) const override;
  double reward(const SVec& x, const SVec& u, const SVec& x_next) const override;
  Vec observe(const SVec& x) const override;
  bool terminal(const SVec& x) const override;
  Eigen::Vector2d position(const SVec& x) const override { return {x[0], x[1]}; }
  SVec qp_state(const SVec& x) const override { return x.head(4); }
  double tracking_error(const SVec& x, const Vec& target) const override;
  double other_cost(const SVec& x, const SVec& u, double w_y, double w_act,
                    double w_bound, double w_coll) const override;

  Eigen::Vector2d opponent_position(const SVec& x) const;
  const Track& track() const { return *track_; }

 private:
  const Track* track_;
  const DangerZone* zone_;
  double passing_coef_;
};

class RacingEnv : public Environment {
 public:
  explicit RacingEnv(const EnvOptions& options = {});
  const EnvSpec& spec() const override { return spec_; }
  Vec reset(RngStream& rng) override;
  StepResult step(const SVec& u) override;
  SVec state() const override;
  const ApproxModel& model() const override { return model_; }
  const DangerZone& zone() const override { return zone_; }
  int episode_steps() const override { return steps_; }
  const Track& track() const { return track_; }

 private:
  EnvSpec spec_;
  Track track_;
  DangerZone zone_;
  RacingModel model_;
  double passing_coef_ = 1.0;
  // (x, y, psi, v, actual steering, opponent arc, ego progress)
  SVec x_;
  int steps_ = 0;
};

}  // namespace hrlmppi
