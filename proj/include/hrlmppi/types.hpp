#pragma once

#include <cstddef>
#include <vector>

#include "hrlmppi/common.hpp"

namespace hrlmppi {

// One real environment step.
struct Transition {
  Vec obs;            // s_t
  Vec action;         // high-level action applied at s_t
  Vec control;        // low-level control actually executed
  double reward = 0;  // r_t
  Vec obs_next;       // s_{t+1}
  bool done = false;
  double log_pi_old = 0;  // log-prob of `action` at collection time
  bool in_danger = false;
};

// One re-scored step of an unselected planner rollout. Rewards and next
// observations come from the approximate model; the value target is
// precomputed along the virtual trajectory at collection time.
struct VirtualTransition {
  Vec obs;
  Vec action;
  Vec control;
  double reward = 0;  // r-hat
  Vec obs_next;       // psi(x-hat_next)
  bool done = false;
  double log_pi_old = 0;
  double v_target = 0;
};

// Dual experience buffers, both cleared after every policy update so the
// data stays on-policy with respect to the current hierarchical controller.
struct RolloutBuffers {
  std::vector<Transition> d_rl;
  std::vector<VirtualTransition> d_mppi;
  std::size_t capacity = 0;  // real steps per update period (0 = unbounded)

  int obs_dim = 0;  // 0 = fixed by the first push
  int action_dim = 0;

  void push(const Transition& t);
  void push(const VirtualTransition& t);
  void clear();

  bool empty() const { return d_rl.empty() && d_mppi.empty(); }

 private:
  void check_dims(const Vec& obs, const Vec& action, const Vec& obs_next);
};

}  // namespace hrlmppi
