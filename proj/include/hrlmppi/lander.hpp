#pragma once

#include "hrlmppi/env.hpp"

namespace hrlmppi {

// Planar lander with a main engine along the body axis and gated lateral
// thrusters. State is (x, y, vx, vy, phi, dphi); the pad is centered at the
// origin with the ground at y = 0. Self-contained rigid-body substitute for
// the Box2D benchmark; the planner model drops the torque coupling and
// ground contact.
namespace lander {

constexpr double kGravity = 10.0;
constexpr double kDt = 0.02;
constexpr double kMainAccel = 13.0;
constexpr double kSideAccel = 8.0;
constexpr double kSideAngAccel = 6.0;
constexpr double kModelTurnRate = 1.2;  // fixed-gain orientation update (model only)
constexpr double kLegX = 0.2, kLegY = -0.3;
constexpr double kBodyBottom = -0.15;
constexpr double kCrashSpeed = 1.2;
constexpr double kCrashTilt = 0.4;
constexpr double kViewX = 4.0, kViewY = 7.0;

// Throttle gating: main fires for u_main > 0, side thrusters for |u_lat| > 0.5.
double main_throttle(double u_main);
double side_throttle(double u_lat);

double leg_height(const SVec& x, double side);  // side = +1 right, -1 left
bool leg_contact(const SVec& x, double side);
double shaping_potential(const SVec& x);
double fuel_cost(const SVec& u);

}  // namespace lander

class LanderModel : public ApproxModel {
 public:
  explicit LanderModel(const DangerZone* zone) : zone_(zone) {}
  int state_dim() const override { return 6; }
  int control_dim() const override { return 2; }
  SVec step(const SVec& x, const SVec& u) const override;
  double reward(const SVec& x, const SVec& u, const SVec& x_next) const override;
  Vec observe(const SVec& x) const override;
  bool terminal(const SVec& x) const override;
  Eigen::Vector2d position(const SVec& x) const override { return {x[0], x[1]}; }
  SVec qp_state(const SVec& x) const override { return x; }
  double tracking_error(const SVec& x, const Vec& target) const override;
  double other_cost(const SVec& x, const SVec& u, double w_y, double w_act,
                    double w_bound, double w_coll) const override;

 private:
  const DangerZone* zone_;
};

class LanderEnv : public Environment {
 public:
  explicit LanderEnv(const EnvOptions& options = {});
  const EnvSpec& spec() const override { return spec_; }
  Vec reset(RngStream& rng) override;
  StepResult step(const SVec& u) override;
  SVec state() const override { return x_; }
  const ApproxModel& model() const override { return model_; }
  const DangerZone& zone() const override { return zone_; }
  int episode_steps() const override { return steps_; }

 private:
  EnvSpec spec_;
  DangerZone zone_;
  bool zone_fixed_ = false;
  LanderModel model_;
  SVec x_;
  int steps_ = 0;
};

}  // namespace hrlmppi
