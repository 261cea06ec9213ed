#pragma once

#include "hrlmppi/env.hpp"

namespace hrlmppi {

// Two-link underactuated pendulum, torque on the elbow joint. State is
// (theta1, theta2, dtheta1, dtheta2) with theta1 measured from the hanging
// position. Standard benchmark parameters, RK4 integration at dt = 0.2.
namespace acrobot {

constexpr double kM1 = 1.0, kM2 = 1.0;
constexpr double kL1 = 1.0, kLc1 = 0.5, kLc2 = 0.5;
constexpr double kI1 = 1.0, kI2 = 1.0;
constexpr double kGravity = 9.8;
constexpr double kDt = 0.2;
constexpr double kMaxVel1 = 4.0 * M_PI;
constexpr double kMaxVel2 = 9.0 * M_PI;

// One environment step of the dynamics (RK4 + angle wrap + velocity clip).
// Shared by the environment and the planner model.
SVec dynamics_step(const SVec& x, double torque);

Eigen::Vector2d tip_position(const SVec& x);
double tip_height(const SVec& x);  // -cos(t1) - cos(t1 + t2)
double mechanical_energy(const SVec& x);

}  // namespace acrobot

class AcrobotModel : public ApproxModel {
 public:
  explicit AcrobotModel(const DangerZone* zone) : zone_(zone) {}
  int state_dim() const override { return 4; }
  int control_dim() const override { return 1; }
  SVec step(const SVec& x, const SVec& u) const override;
  double reward(const SVec& x, const SVec& u, const SVec& x_next) const override;
  Vec observe(const SVec& x) const override;
  bool terminal(const SVec& x) const override;
  Eigen::Vector2d position(const SVec& x) const override { return acrobot::tip_position(x); }
  SVec qp_state(const SVec& x) const override { return x; }
  double tracking_error(const SVec& x, const Vec& target) const override;

 private:
  const DangerZone* zone_;
};

class AcrobotEnv : public Environment {
 public:
  explicit AcrobotEnv(const EnvOptions& options = {});
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
  AcrobotModel model_;
  SVec x_;
  int steps_ = 0;
};

}  // namespace hrlmppi
