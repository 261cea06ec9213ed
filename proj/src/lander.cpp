#include "hrlmppi/lander.hpp"

namespace hrlmppi {

namespace lander {

double main_throttle(double u_main) {
  if (u_main <= 0) return 0;
  return 0.5 + 0.5 * clamp(u_main, 0.0, 1.0);
}

double side_throttle(double u_lat) {
  const double a = std::abs(u_lat);
  if (a <= 0.5) return 0;
  return clamp(a, 0.5, 1.0);
}

double leg_height(const SVec& x, double side) {
  const double ox = side * kLegX;
  return x[1] + ox * std::sin(x[4]) + kLegY * std::cos(x[4]);
}

bool leg_contact(const SVec& x, double side) { return leg_height(x, side) <= 0.02; }

double shaping_potential(const SVec& x) {
  const double dist = std::sqrt(x[0] * x[0] + x[1] * x[1]);
  const double speed = std::sqrt(x[2] * x[2] + x[3] * x[3]);
  return -100.0 * dist - 100.0 * speed - 100.0 * std::abs(x[4]);
}

double fuel_cost(const SVec& u) {
  double c = 0;
  if (main_throttle(u[0]) > 0) c += 0.3;
  if (side_throttle(u[1]) > 0) c += 0.03;
  return c;
}

namespace {

struct Accel {
  double ax, ay, aphi;
};

Accel thrust(const SVec& x, const SVec& u) {
  const double phi = x[4];
  const double fm = main_throttle(u[0]);
  const double fs = side_throttle(u[1]);
  const double dir = u[1] > 0 ? 1.0 : -1.0;
  Accel a{};
  a.ax = kMainAccel * fm * (-std::sin(phi)) + kSideAccel * fs * dir * std::cos(phi);
  a.ay = kMainAccel * fm * std::cos(phi) + kSideAccel * fs * dir * std::sin(phi) - kGravity;
  a.aphi = -kSideAngAccel * fs * dir;
  return a;
}

}  // namespace
}  // namespace lander

SVec LanderModel::step(const SVec& x, const SVec& u) const {
  using namespace lander;
  const double fm = main_throttle(u[0]);
  const double fs = side_throttle(u[1]);
  const double dir = u[1] > 0 ? 1.0 : -1.0;
  const double phi = x[4];
  SVec next(6);
  const double ax = kMainAccel * fm * (-std::sin(phi)) + kSideAccel * fs * dir * std::cos(phi);
  const double ay = kMainAccel * fm * std::cos(phi) + kSideAccel * fs * dir * std::sin(phi) - kGravity;
  next[2] = x[2] + ax * kDt;
  next[3] = x[3] + ay * kDt;
  next[0] = x[0] + next[2] * kDt;
  next[1] = x[1] + next[3] * kDt;
  // fixed-gain orientation update instead of torque integration
  next[4] = x[4] + kModelTurnRate * fs * dir * kDt;
  next[5] = kModelTurnRate * fs * dir;
  return next;
}

double LanderModel::reward(const SVec& x, const SVec& u, const SVec& x_next) const {
  using namespace lander;
  double r = shaping_potential(x_next) - shaping_potential(x);
  r += 10.0 * leg_contact(x_next, -1.0) + 10.0 * leg_contact(x_next, 1.0);
  r -= fuel_cost(u);
  if (zone_->contains(x_next[0], x_next[1])) r += -5.0;
  return r;  // terminal bonuses excluded
}

Vec LanderModel::observe(const SVec& x) const {
  Vec obs(12);
  obs << x[0], x[1], x[2], x[3], x[4], x[5],
      lander::leg_contact(x, -1.0) ? 1.0 : 0.0, lander::leg_contact(x, 1.0) ? 1.0 : 0.0,
      zone_->cx, zone_->cy, zone_->width, zone_->height;
  return obs;
}

bool LanderModel::terminal(const SVec& x) const {
  return x[1] <= 0.25 || std::abs(x[0]) > lander::kViewX || x[1] > lander::kViewY;
}

double LanderModel::tracking_error(const SVec& x, const Vec& target) const {
  const double ex = x[2] - target[0];
  const double ey = x[3] - target[1];
  return std::sqrt(ex * ex + ey * ey);
}

double LanderModel::other_cost(const SVec& x, const SVec& u, double w_y, double w_act,
                               double /*w_bound*/, double /*w_coll*/) const {
  return w_y * x[1] * x[1] + w_act * u.squaredNorm();
}

LanderEnv::LanderEnv(const EnvOptions& options)
    : zone_(options.zone_override ? options.zone : DangerZone{0.0, 2.0, 1.0, 0.8}),
      zone_fixed_(options.zone_override),
      model_(&zone_) {
  spec_.name = "lander";
  spec_.obs_dim = 12;
  spec_.control_dim = 2;
  spec_.max_steps = 500;
  spec_.u_lo = Vec::Constant(2, -1.0);
  spec_.u_hi = Vec::Constant(2, 1.0);
  spec_.danger_penalty = -5.0;
  spec_.zone_randomized = !zone_fixed_;
  spec_.qp_state_dim = 6;
  spec_.target_scale = Vec::Constant(2, 2.0);
  spec_.reward_min = -110.0;
  spec_.reward_max = 125.0;
  x_ = SVec::Zero(6);
}

Vec LanderEnv::reset(RngStream& rng) {
  x_ = SVec::Zero(6);
  x_[0] = rng.uniform(-0.3, 0.3);
  x_[1] = 4.0;
  x_[2] = rng.uniform(-0.5, 0.5);
  x_[3] = rng.uniform(-0.5, 0.0);
  x_[4] = rng.uniform(-0.05, 0.05);
  if (!zone_fixed_) {
    zone_.cx = rng.uniform(-1.5, 1.5);
    zone_.cy = rng.uniform(1.0, 3.0);
    zone_.width = 1.0;
    zone_.height = 0.8;
  }
  steps_ = 0;
  return model_.observe(x_);
}

StepResult LanderEnv::step(const SVec& u) {
  using namespace lander;
  const double pot_before = shaping_potential(x_);
  const auto a = thrust(x_, u);
  x_[2] += a.ax * kDt;
  x_[3] += a.ay * kDt;
  x_[0] += x_[2] * kDt;
  x_[1] += x_[3] * kDt;
  x_[5] += a.aphi * kDt;
  x_[4] += x_[5] * kDt;
  ++steps_;

  StepResult r;
  const double body_y = x_[1] + kBodyBottom * std::cos(x_[4]);
  const double impact_speed = std::sqrt(x_[2] * x_[2] + x_[3] * x_[3]);
  const double min_leg = std::min(leg_height(x_, -1.0), leg_height(x_, 1.0));

  bool crashed = false;
  if (!all_finite(x_)) {
    r.done = true;
    r.reason = TermReason::kDiverged;
    x_ = SVec::Zero(6);
  } else if (body_y <= 0.0) {
    crashed = true;
  } else if (min_leg <= 0.0 &&
             (impact_speed > kCrashSpeed || std::abs(x_[4]) > kCrashTilt)) {
    crashed = true;
  } else if (min_leg <= 0.0) {
    // legs absorb the touchdown
    x_[1] -= min_leg;
    x_[3] = std::max(x_[3], 0.0);
    x_[2] *= 0.5;
    x_[5] *= 0.3;
    x_[4] *= 0.95;
  }

  r.in_danger = zone_.contains(x_[0], x_[1]);
  r.reward = shaping_potential(x_) - pot_before;
  r.reward += 10.0 * leg_contact(x_, -1.0) + 10.0 * leg_contact(x_, 1.0);
  r.reward -= fuel_cost(u);
  if (r.in_danger) r.reward += spec_.danger_penalty;

  const bool at_rest = leg_contact(x_, -1.0) && leg_contact(x_, 1.0) &&
                       std::abs(x_[2]) <= 0.1 && std::abs(x_[3]) <= 0.1 &&
                       std::abs(x_[5]) <= 0.2;
  if (r.reason != TermReason::kDiverged) {
    if (crashed) {
      r.done = true;
      r.reason = TermReason::kCrash;
      r.reward += -100.0;
    } else if (at_rest) {
      r.done = true;
      r.success = true;
      r.reason = TermReason::kGoal;
      r.reward += 100.0;
    } else if (std::abs(x_[0]) > kViewX || x_[1] > kViewY) {
      r.done = true;
      r.reason = TermReason::kViewport;
    } else if (steps_ >= spec_.max_steps) {
      r.done = true;
      r.reason = TermReason::kTruncated;
    }
  }
  r.obs = model_.observe(x_);
  return r;
}

}  // namespace hrlmppi
