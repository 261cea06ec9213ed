#pragma once

#include <vector>

#include "hrlmppi/cost.hpp"
#include "hrlmppi/env.hpp"
#include "hrlmppi/rng.hpp"

namespace hrlmppi {

// Cost assigned to rollouts whose model state stops being finite.
constexpr double kCostSentinel = 1e30;

struct MppiConfig {
  int num_samples = 100;  // K
  int horizon = 10;       // H
  Vec noise_sigma;        // per control dimension; empty = 0.5 everywhere
  double temperature = 1.0;

  void validate(int control_dim) const;
  Vec sigma_for(int control_dim) const;
};

// One candidate after the update law: the updated control sequence, its
// open-loop trajectory under the approximate model, and the re-scored
// per-step virtual rewards.
struct CandidatePlan {
  Mat controls;             // H x nu
  std::vector<SVec> states; // H+1, states[0] = x_t
  Vec rewards;              // H
  double cost = 0;          // rollout cost of the updated sequence
  bool diverged = false;
};

// K i.i.d. Gaussian perturbation sequences, each H x nu with covariance
// diag(sigma^2) per step.
std::vector<Mat> sample_perturbations(const MppiConfig& cfg, int control_dim,
                                      RngStream& rng);

struct RolloutResult {
  std::vector<SVec> states;
  double cost = 0;
  bool diverged = false;
};

// Open-loop rollout of u_nom + eps (clamped to the control box) through the
// model, accumulating the decomposed running cost plus the terminal term.
RolloutResult rollout_cost(const ApproxModel& model, const CostEvaluator& cost,
                           const SVec& x0, const Mat& u_nom, const Mat& eps,
                           const DecodedAction& action, const Vec& u_lo,
                           const Vec& u_hi);

// Exponentially cost-weighted importance weights, min-shifted for numerical
// stability (exact by shift invariance). All-sentinel costs degrade to
// uniform weights and set *degenerate.
Vec mppi_weights(const Vec& costs, double temperature, bool* degenerate = nullptr);

// u_nom + weighted noise, clamped to the control box per step.
Mat mppi_update(const Mat& u_nom, const std::vector<Mat>& eps, const Vec& weights,
                const Vec& u_lo, const Vec& u_hi);

// Receding-horizon planner conditioned on high-level actions. All M
// candidates in one plan() call share a single perturbation set.
class MppiPlanner {
 public:
  MppiPlanner(MppiConfig cfg, const ApproxModel* model, CostEvaluator cost,
              const EnvSpec* spec, RlCostForm form);

  std::vector<CandidatePlan> plan(const SVec& x0, const std::vector<Vec>& actions,
                                  RngStream& rng);

  // Warm start: shift the selected sequence left one step, repeating the
  // last entry.
  void advance(const CandidatePlan& selected);
  void reset();

  const Mat& nominal() const { return nominal_; }
  const MppiConfig& config() const { return cfg_; }
  long degenerate_weight_events() const { return degenerate_events_; }

 private:
  MppiConfig cfg_;
  const ApproxModel* model_;
  CostEvaluator cost_;
  const EnvSpec* spec_;
  RlCostForm form_;
  Mat nominal_;  // H x nu
  long degenerate_events_ = 0;
};

}  // namespace hrlmppi
