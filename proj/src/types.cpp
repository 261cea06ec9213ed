#include "hrlmppi/types.hpp"

namespace hrlmppi {

void RolloutBuffers::check_dims(const Vec& obs, const Vec& action, const Vec& obs_next) {
  if (obs_dim == 0) {
    obs_dim = static_cast<int>(obs.size());
    action_dim = static_cast<int>(action.size());
  }
  if (obs.size() != obs_dim || obs_next.size() != obs_dim)
    throw DimensionError("buffer push: observation dimension mismatch");
  if (action.size() != action_dim)
    throw DimensionError("buffer push: action dimension mismatch");
}

void RolloutBuffers::push(const Transition& t) {
  check_dims(t.obs, t.action, t.obs_next);
  if (!is_finite(t.reward)) throw NumericError("buffer push: non-finite reward");
  if (!is_finite(t.log_pi_old)) throw NumericError("buffer push: non-finite log_pi_old");
  d_rl.push_back(t);
}

void RolloutBuffers::push(const VirtualTransition& t) {
  check_dims(t.obs, t.action, t.obs_next);
  if (!is_finite(t.reward)) throw NumericError("buffer push: non-finite reward");
  if (!is_finite(t.log_pi_old)) throw NumericError("buffer push: non-finite log_pi_old");
  if (!is_finite(t.v_target)) throw NumericError("buffer push: non-finite v_target");
  d_mppi.push_back(t);
}

void RolloutBuffers::clear() {
  d_rl.clear();
  d_mppi.clear();
}

}  // namespace hrlmppi
