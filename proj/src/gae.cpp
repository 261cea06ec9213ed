#include "hrlmppi/gae.hpp"

#include <vector>

namespace hrlmppi {

GaeResult compute_gae(const Vec& rewards, const Vec& values,
                      const std::vector<bool>& dones, double gamma,
                      double lambda, double bootstrap) {
  const auto T = rewards.size();
  if (values.size() != T || static_cast<Eigen::Index>(dones.size()) != T)
    throw DimensionError("compute_gae: length mismatch");
  GaeResult out;
  out.advantages = Vec::Zero(T);
  double gae = 0;
  for (Eigen::Index t = T - 1; t >= 0; --t) {
    const double not_done = dones[t] ? 0.0 : 1.0;
    const double next_value = (t == T - 1) ? bootstrap : values[t + 1];
    const double delta = rewards[t] + gamma * next_value * not_done - values[t];
    gae = delta + gamma * lambda * not_done * gae;
    out.advantages[t] = gae;
  }
  out.value_targets = out.advantages + values;
  return out;
}

}  // namespace hrlmppi
