#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hrlmppi/trainer.hpp"

namespace hrlmppi {

// Inputs for the `bound` command; unset entries are derived from the rest of
// the configuration or estimated empirically.
struct BoundConfig {
  std::optional<double> rho, alpha_p, alpha_r, gamma;
  std::optional<int> horizon;
  std::optional<double> span_r, r_max, span_g, d_u, lambda_max;
};

// One experiment: environment, controller mode, planner + learner settings
// and the seed list. Defaults follow the published hyperparameter tables;
// env-dependent defaults resolve after the `env` key is known.
struct RunConfig {
  std::string env = "acrobot";
  RunMode mode = RunMode::kPpoMppi;
  std::vector<std::uint64_t> seeds = {0};
  std::string out_dir = "runs";
  std::string label;  // grouping key for analysis; derived when empty
  EnvOptions env_options;
  RlCostForm rl_form = RlCostForm::kTracking;
  MppiConfig mppi;
  CostConfig cost;
  PpoConfig ppo;
  TrainerConfig trainer;
  InfluenceState influence;
  BoundConfig bound;
  int ensemble_heads = 5;
  std::vector<int> hidden = {64, 64};
};

// Key-value format with dotted sections ("mppi.horizon = 10"), '#' comments.
// Unknown keys, type errors and constraint violations all fail with the
// offending line number.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text,
                            const std::string& origin = "<config>");
std::string serialize_config(const RunConfig& cfg);

std::string default_label(const RunConfig& cfg);

// Per-seed training setup derived from a run configuration.
TrainSetup make_setup(const RunConfig& cfg, std::uint64_t seed);

}  // namespace hrlmppi
