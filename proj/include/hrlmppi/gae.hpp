#pragma once

#include "hrlmppi/common.hpp"

namespace hrlmppi {

struct GaeResult {
  Vec advantages;
  Vec value_targets;  // advantage + value
};

// Generalized advantage estimation over a contiguous span of transitions.
// `dones[t]` marks that transition t ended an episode (no bootstrap across
// it); `bootstrap` is the value estimate of the state after the last
// transition, ignored when dones.back() is set.
GaeResult compute_gae(const Vec& rewards, const Vec& values,
                      const std::vector<bool>& dones, double gamma,
                      double lambda, double bootstrap);

}  // namespace hrlmppi
