#include "hrlmppi/racing.hpp"

namespace hrlmppi {

using namespace racing;

namespace {

double wrapped_arc_delta(double s_new, double s_old, double length) {
  double ds = s_new - s_old;
  if (ds > 0.5 * length) ds -= length;
  if (ds < -0.5 * length) ds += length;
  return ds;
}

Vec racing_observation(const Track& track, const DangerZone& zone, const SVec& x) {
  const Eigen::Vector2d p{x[0], x[1]};
  const auto proj = track.project(p);
  Vec obs(17);
  obs[0] = x[0];
  obs[1] = x[1];
  obs[2] = x[3];
  obs[3] = x[2];
  obs[4] = proj.lateral / track.half_width();
  obs[5] = wrap_angle(x[2] - track.heading_at(proj.s));
  const double lookahead[4] = {5.0, 10.0, 20.0, 40.0};
  const double c = std::cos(-x[2]), s = std::sin(-x[2]);
  for (int i = 0; i < 4; ++i) {
    const Eigen::Vector2d q = track.point_at(proj.s + lookahead[i]) - p;
    obs[6 + 2 * i] = c * q.x() - s * q.y();
    obs[7 + 2 * i] = s * q.x() + c * q.y();
  }
  obs[14] = zone.cx;
  obs[15] = zone.cy;
  obs[16] = zone.width;
  return obs;
}

}  // namespace

SVec RacingModel::step(const SVec& x, const SVec& u) const {
  const double steer = clamp(u[0], -1.0, 1.0) * kMaxSteer;
  const double accel = clamp(u[1], -1.0, 1.0) * kMaxAccel;
  SVec next(6);
  next[0] = x[0] + x[3] * std::cos(x[2]) * kDt;
  next[1] = x[1] + x[3] * std::sin(x[2]) * kDt;
  next[2] = wrap_angle(x[2] + x[3] / kWheelbase * std::tan(steer) * kDt);
  next[3] = clamp(x[3] + accel * kDt, 0.0, kMaxSpeed);
  next[4] = x[4] + kOpponentSpeed * kDt;
  const double s_old = track_->project_near({x[0], x[1]}, x[5]).s;
  const double s_new = track_->project_near({next[0], next[1]}, s_old).s;
  next[5] = x[5] + wrapped_arc_delta(s_new, s_old, track_->length());
  return next;
}

Eigen::Vector2d RacingModel::opponent_position(const SVec& x) const {
  return track_->point_at(x[4]);
}

double RacingModel::reward(const SVec& x, const SVec& /*u*/, const SVec& x_next) const {
  const double ds = x_next[5] - x[5];
  double r = kProgressCoef * ds;
  const Eigen::Vector2d p{x_next[0], x_next[1]};
  const double opp_dist = (p - opponent_position(x_next)).norm();
  if (opp_dist < kNearDist && x_next[3] > kOpponentSpeed)
    r += passing_coef_ * (x_next[3] - kOpponentSpeed) * kDt;
  r -= kBoundaryCoef * track_->boundary_proportion_near(p, x_next[5]);
  if (zone_->contains(p.x(), p.y())) r += -150.0;
  return r;  // terminal bonuses excluded
}

Vec RacingModel::observe(const SVec& x) const {
  return racing_observation(*track_, *zone_, x);
}

bool RacingModel::terminal(const SVec& x) const {
  const Eigen::Vector2d p{x[0], x[1]};
  if (track_->boundary_proportion_near(p, x[5]) > 1.0) return true;
  if ((p - opponent_position(x)).norm() <= kContactDist) return true;
  return x[5] >= kGoalArc;
}

double RacingModel::tracking_error(const SVec& x, const Vec& target) const {
  const double ex = x[3] * std::cos(x[2]) - target[0];
  const double ey = x[3] * std::sin(x[2]) - target[1];
  return std::sqrt(ex * ex + ey * ey);
}

double RacingModel::other_cost(const SVec& x, const SVec& /*u*/, double /*w_y*/,
                               double /*w_act*/, double w_bound, double w_coll) const {
  const Eigen::Vector2d p{x[0], x[1]};
  const double coll = (p - opponent_position(x)).norm() <= kContactDist ? 1.0 : 0.0;
  const double over = std::max(0.0, track_->boundary_proportion_near(p, x[5]) - 1.0);
  return w_coll * coll + w_bound * over * over;
}

RacingEnv::RacingEnv(const EnvOptions& options)
    : track_(options.track_file.empty() ? Track::built_in()
                                        : Track::from_file(options.track_file)),
      zone_(options.zone_override
                ? options.zone
                : DangerZone::square(track_.point_at(120.0).x(),
                                     track_.point_at(120.0).y(), 6.0)),
      model_(&track_, &zone_, options.passing_coef),
      passing_coef_(options.passing_coef) {
  spec_.name = "racing";
  spec_.obs_dim = 17;
  spec_.control_dim = 2;
  spec_.max_steps = 400;
  spec_.u_lo = Vec::Constant(2, -1.0);
  spec_.u_hi = Vec::Constant(2, 1.0);
  spec_.danger_penalty = -150.0;
  spec_.zone_randomized = false;
  spec_.qp_state_dim = 4;
  spec_.target_scale = Vec::Constant(2, kMaxSpeed);
  spec_.reward_min = -1155.0;
  spec_.reward_max = 1005.0;
  x_ = SVec::Zero(7);
}

Vec RacingEnv::reset(RngStream& rng) {
  x_ = SVec::Zero(7);
  const double lateral = rng.uniform(-2.0, 2.0);
  const auto p0 = track_.point_at(0.0);
  const double h0 = track_.heading_at(0.0);
  // left normal of the tangent
  x_[0] = p0.x() - std::sin(h0) * lateral;
  x_[1] = p0.y() + std::cos(h0) * lateral;
  x_[2] = h0;
  x_[3] = rng.uniform(4.0, 6.0);
  x_[4] = 0.0;  // actual steering
  x_[5] = kOpponentStart;
  x_[6] = 0.0;  // progress
  steps_ = 0;
  return model_.observe(state());
}

SVec RacingEnv::state() const {
  SVec m(6);
  m << x_[0], x_[1], x_[2], x_[3], x_[5], x_[6];
  return m;
}

StepResult RacingEnv::step(const SVec& u) {
  const double steer_cmd = clamp(u[0], -1.0, 1.0) * kMaxSteer;
  x_[4] += (steer_cmd - x_[4]) * std::min(1.0, kDt / kSteerTau);
  const double accel = clamp(u[1], -1.0, 1.0) * kMaxAccel - kDrag * x_[3] * x_[3];

  const double s_old = track_.project({x_[0], x_[1]}).s;
  x_[0] += x_[3] * std::cos(x_[2]) * kDt;
  x_[1] += x_[3] * std::sin(x_[2]) * kDt;
  x_[2] = wrap_angle(x_[2] + x_[3] / kWheelbase * std::tan(x_[4]) * kDt);
  x_[3] = clamp(x_[3] + accel * kDt, 0.0, kMaxSpeed);
  x_[5] += kOpponentSpeed * kDt;
  const double s_new = track_.project({x_[0], x_[1]}).s;
  const double ds = wrapped_arc_delta(s_new, s_old, track_.length());
  x_[6] += ds;
  ++steps_;

  StepResult r;
  const Eigen::Vector2d p{x_[0], x_[1]};
  const Eigen::Vector2d opp = track_.point_at(x_[5]);
  const double bp = track_.boundary_proportion(p);
  r.in_danger = zone_.contains(p.x(), p.y());

  r.reward = kProgressCoef * ds;
  const double opp_dist = (p - opp).norm();
  if (opp_dist < kNearDist && x_[3] > kOpponentSpeed)
    r.reward += passing_coef_ * (x_[3] - kOpponentSpeed) * kDt;
  r.reward -= kBoundaryCoef * bp;
  if (r.in_danger) r.reward += spec_.danger_penalty;

  if (!all_finite(x_)) {
    r.done = true;
    r.reason = TermReason::kDiverged;
    x_ = SVec::Zero(7);
  } else if (opp_dist <= kContactDist) {
    r.done = true;
    r.reason = TermReason::kCollision;
    r.reward += -1000.0;
  } else if (bp > 1.0) {
    r.done = true;
    r.reason = TermReason::kOfftrack;
    r.reward += -100.0;
  } else if (x_[6] >= kGoalArc) {
    r.done = true;
    r.success = true;
    r.reason = TermReason::kGoal;
    r.reward += 1000.0;
  } else if (steps_ >= spec_.max_steps) {
    r.done = true;
    r.reason = TermReason::kTruncated;
  }
  r.obs = model_.observe(state());
  return r;
}

}  // namespace hrlmppi
