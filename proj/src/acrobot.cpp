#include "hrlmppi/acrobot.hpp"

namespace hrlmppi {

namespace acrobot {

namespace {

// Equations of motion in the Sutton & Barto form used by the classic
// benchmark.
SVec derivs(const SVec& x, double torque) {
  const double t1 = x[0], t2 = x[1], dt1 = x[2], dt2 = x[3];
  const double d1 = kM1 * kLc1 * kLc1 +
                    kM2 * (kL1 * kL1 + kLc2 * kLc2 + 2.0 * kL1 * kLc2 * std::cos(t2)) +
                    kI1 + kI2;
  const double d2 = kM2 * (kLc2 * kLc2 + kL1 * kLc2 * std::cos(t2)) + kI2;
  const double phi2 = kM2 * kLc2 * kGravity * std::cos(t1 + t2 - M_PI_2);
  const double phi1 = -kM2 * kL1 * kLc2 * dt2 * dt2 * std::sin(t2) -
                      2.0 * kM2 * kL1 * kLc2 * dt2 * dt1 * std::sin(t2) +
                      (kM1 * kLc1 + kM2 * kL1) * kGravity * std::cos(t1 - M_PI_2) + phi2;
  const double ddt2 =
      (torque + d2 / d1 * phi1 - kM2 * kL1 * kLc2 * dt1 * dt1 * std::sin(t2) - phi2) /
      (kM2 * kLc2 * kLc2 + kI2 - d2 * d2 / d1);
  const double ddt1 = -(d2 * ddt2 + phi1) / d1;
  SVec dx(4);
  dx << dt1, dt2, ddt1, ddt2;
  return dx;
}

SVec rk4(const SVec& x, double torque, double h) {
  const SVec k1 = derivs(x, torque);
  const SVec k2 = derivs(x + 0.5 * h * k1, torque);
  const SVec k3 = derivs(x + 0.5 * h * k2, torque);
  const SVec k4 = derivs(x + h * k3, torque);
  return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

SVec dynamics_step(const SVec& x, double torque) {
  torque = clamp(torque, -1.0, 1.0);
  SVec next = rk4(x, torque, kDt);
  next[0] = wrap_angle(next[0]);
  next[1] = wrap_angle(next[1]);
  next[2] = clamp(next[2], -kMaxVel1, kMaxVel1);
  next[3] = clamp(next[3], -kMaxVel2, kMaxVel2);
  return next;
}

Eigen::Vector2d tip_position(const SVec& x) {
  const double t1 = x[0], t2 = x[1];
  return {std::sin(t1) + std::sin(t1 + t2), -std::cos(t1) - std::cos(t1 + t2)};
}

double tip_height(const SVec& x) {
  return -std::cos(x[0]) - std::cos(x[0] + x[1]);
}

double mechanical_energy(const SVec& x) {
  const double t1 = x[0], t2 = x[1], dt1 = x[2], dt2 = x[3];
  const double d1 = kM1 * kLc1 * kLc1 +
                    kM2 * (kL1 * kL1 + kLc2 * kLc2 + 2.0 * kL1 * kLc2 * std::cos(t2)) +
                    kI1 + kI2;
  const double d2 = kM2 * (kLc2 * kLc2 + kL1 * kLc2 * std::cos(t2)) + kI2;
  const double m22 = kM2 * kLc2 * kLc2 + kI2;
  const double kinetic = 0.5 * (d1 * dt1 * dt1 + 2.0 * d2 * dt1 * dt2 + m22 * dt2 * dt2);
  const double potential = -(kM1 * kLc1 + kM2 * kL1) * kGravity * std::cos(t1) -
                           kM2 * kLc2 * kGravity * std::cos(t1 + t2);
  return kinetic + potential;
}

}  // namespace acrobot

SVec AcrobotModel::step(const SVec& x, const SVec& u) const {
  return acrobot::dynamics_step(x, u[0]);
}

double AcrobotModel::reward(const SVec& /*x*/, const SVec& /*u*/, const SVec& x_next) const {
  const auto p = acrobot::tip_position(x_next);
  double r = -1.0;
  if (zone_->contains(p.x(), p.y())) r += -50.0;
  return r;
}

Vec AcrobotModel::observe(const SVec& x) const {
  Vec obs(9);
  obs << std::cos(x[0]), std::sin(x[0]), std::cos(x[1]), std::sin(x[1]), x[2], x[3],
      zone_->cx, zone_->cy, zone_->width;
  return obs;
}

bool AcrobotModel::terminal(const SVec& x) const {
  return acrobot::tip_height(x) > 1.0;
}

double AcrobotModel::tracking_error(const SVec& x, const Vec& target) const {
  const double e1 = wrap_angle(x[0] - target[0]);
  const double e2 = wrap_angle(x[1] - target[1]);
  return std::sqrt(e1 * e1 + e2 * e2);
}

AcrobotEnv::AcrobotEnv(const EnvOptions& options)
    : zone_(options.zone_override ? options.zone : DangerZone::square(1.0, -1.0, 0.5)),
      model_(&zone_) {
  spec_.name = "acrobot";
  spec_.obs_dim = 9;
  spec_.control_dim = 1;
  spec_.max_steps = 500;
  spec_.u_lo = Vec::Constant(1, -1.0);
  spec_.u_hi = Vec::Constant(1, 1.0);
  spec_.danger_penalty = -50.0;
  spec_.zone_randomized = false;
  spec_.qp_state_dim = 4;
  spec_.target_scale = Vec::Constant(2, M_PI);
  spec_.reward_min = -51.0;
  spec_.reward_max = -1.0;
  x_ = SVec::Zero(4);
}

Vec AcrobotEnv::reset(RngStream& rng) {
  for (int i = 0; i < 4; ++i) x_[i] = rng.uniform(-0.1, 0.1);
  steps_ = 0;
  return model_.observe(x_);
}

StepResult AcrobotEnv::step(const SVec& u) {
  x_ = acrobot::dynamics_step(x_, u[0]);
  ++steps_;
  StepResult r;
  const auto tip = acrobot::tip_position(x_);
  r.in_danger = zone_.contains(tip.x(), tip.y());
  r.reward = -1.0 + (r.in_danger ? spec_.danger_penalty : 0.0);
  if (!all_finite(x_)) {
    r.done = true;
    r.reason = TermReason::kDiverged;
    x_ = SVec::Zero(4);
  } else if (acrobot::tip_height(x_) > 1.0) {
    r.done = true;
    r.success = true;
    r.reason = TermReason::kGoal;
  } else if (steps_ >= spec_.max_steps) {
    r.done = true;
    r.reason = TermReason::kTruncated;
  }
  r.obs = model_.observe(x_);
  return r;
}

}  // namespace hrlmppi
