#pragma once

#include <memory>
#include <string>

#include "hrlmppi/common.hpp"
#include "hrlmppi/rng.hpp"

namespace hrlmppi {

// Axis-aligned rectangular danger region; membership is closed containment.
struct DangerZone {
  double cx = 0, cy = 0;
  double width = 0, height = 0;

  bool contains(double x, double y) const {
    return std::abs(x - cx) <= 0.5 * width && std::abs(y - cy) <= 0.5 * height;
  }
  static DangerZone square(double cx, double cy, double side) {
    return DangerZone{cx, cy, side, side};
  }
};

enum class TermReason {
  kNone,
  kGoal,      // task solved (swing-up height / safe landing / finish line)
  kCrash,
  kOfftrack,
  kCollision,
  kViewport,
  kTruncated,
  kDiverged,
};

struct StepResult {
  Vec obs;
  double reward = 0;
  bool done = false;
  bool success = false;
  bool in_danger = false;
  TermReason reason = TermReason::kNone;
};

struct EnvSpec {
  std::string name;
  int obs_dim = 0;
  int control_dim = 0;
  int max_steps = 0;
  Vec u_lo, u_hi;            // control box
  double danger_penalty = 0; // per step inside the zone
  bool zone_randomized = false;
  int qp_state_dim = 0;      // physical substate length used by the quadratic cost
  Vec target_scale;          // maps a in [-1,1]^2 onto tracking targets
  double reward_min = 0, reward_max = 0;  // per-step range, diagnostics only
};

// Deterministic approximate model used by the planner: dynamics P-hat,
// reward r-hat and the interface map psi into the RL observation space.
class ApproxModel {
 public:
  virtual ~ApproxModel() = default;
  virtual int state_dim() const = 0;
  virtual int control_dim() const = 0;
  virtual SVec step(const SVec& x, const SVec& u) const = 0;
  virtual double reward(const SVec& x, const SVec& u, const SVec& x_next) const = 0;
  virtual Vec observe(const SVec& x) const = 0;
  // Whether a virtual rollout should stop at x (mirrors the env's terminal
  // conditions; danger zones never terminate).
  virtual bool terminal(const SVec& x) const { (void)x; return false; }
  virtual Eigen::Vector2d position(const SVec& x) const = 0;
  virtual SVec qp_state(const SVec& x) const = 0;
  virtual double tracking_error(const SVec& x, const Vec& target) const = 0;
  // Domain-specific running cost terms outside the RL and danger terms
  // (altitude/effort for the lander, collision/boundary for racing).
  virtual double other_cost(const SVec& x, const SVec& u, double w_y, double w_act,
                            double w_bound, double w_coll) const {
    (void)x; (void)u; (void)w_y; (void)w_act; (void)w_bound; (void)w_coll;
    return 0;
  }
};

class Environment {
 public:
  virtual ~Environment() = default;
  virtual const EnvSpec& spec() const = 0;
  virtual Vec reset(RngStream& rng) = 0;
  virtual StepResult step(const SVec& u) = 0;
  virtual SVec state() const = 0;  // current state in the planner's space
  virtual const ApproxModel& model() const = 0;
  virtual const DangerZone& zone() const = 0;
  virtual int episode_steps() const = 0;
};

struct EnvOptions {
  bool zone_override = false;
  DangerZone zone;
  std::string track_file;   // racing only; empty = built-in track
  double passing_coef = 1.0;  // racing overtake reward coefficient
};

std::unique_ptr<Environment> make_env(const std::string& name,
                                      const EnvOptions& options = {});

}  // namespace hrlmppi
