#pragma once

#include <memory>
#include <optional>
#include <string>

#include "hrlmppi/checkpoint.hpp"
#include "hrlmppi/mppi.hpp"
#include "hrlmppi/ppo.hpp"

namespace hrlmppi {

enum class RunMode { kPpoBaseline, kPpoMppi };

RunMode parse_run_mode(const std::string& s);
std::string to_string(RunMode mode);

struct TrainerConfig {
  RunMode mode = RunMode::kPpoMppi;
  long total_steps = 100000;
  int candidates = 4;      // M
  int update_period = 512; // real env steps per policy update
  int eval_episodes = 50;
  long eval_interval = 10000;  // 0 disables periodic evaluation
  double target_success = 0;   // early stop threshold on periodic evals (0 = off)
  std::uint64_t seed = 0;

  void validate() const;
};

struct TrainSetup {
  std::string env_name = "acrobot";
  EnvOptions env_options;
  RlCostForm rl_form = RlCostForm::kTracking;
  MppiConfig mppi;
  CostConfig cost;
  PpoConfig ppo;
  TrainerConfig trainer;
  InfluenceState influence;
  int ensemble_heads = 5;
  std::vector<int> hidden = {64, 64};
};

struct EvalEpisode {
  double reward = 0;
  int length = 0;
  bool success = false;
  double dist_to_goal = 0;    // lander
  bool coll_or_offtrack = false;  // racing
  int danger_steps = 0;
};

struct EvalReport {
  std::string env_name;
  std::vector<EvalEpisode> episodes;

  double success_rate() const;
  double mean_reward() const;
  double mean_length() const;
  double mean_danger_steps() const;
};

struct TrainResult {
  long steps_run = 0;
  int episodes = 0;
  EvalReport final_eval;
  bool stopped_early = false;
};

// Runs the co-training loop: per step the policy proposes M candidate
// actions, the planner refines all of them against one shared noise set,
// a uniformly drawn candidate drives the real environment and the rest are
// re-scored into virtual experience.
class Trainer {
 public:
  explicit Trainer(const TrainSetup& setup);

  struct StepRecord {
    double reward = 0;
    bool done = false;
    bool success = false;
    bool in_danger = false;
    int m_star = 0;
    int virtual_added = 0;
  };
  StepRecord collect_step();

  // Full training run; writes metrics.csv, eval.csv and checkpoint.bin into
  // out_dir (created if needed). Empty out_dir skips all file output.
  TrainResult train(const std::string& out_dir);

  EvalReport evaluate(int episodes, std::uint64_t eval_stream);

  // Replaces the networks with checkpointed ones (dimensions must match).
  void load(const LoadedCheckpoint& ckpt);

  PolicyNet& policy() { return policy_; }
  ValueEnsemble& ensemble() { return ensemble_; }
  RolloutBuffers& buffers() { return buffers_; }
  Environment& env() { return *env_; }
  InfluenceState& influence() { return influence_; }
  const TrainSetup& setup() const { return setup_; }
  int action_dim() const { return policy_.act_dim(); }

 private:
  UpdateStats run_update();

  TrainSetup setup_;
  std::unique_ptr<Environment> env_;
  PolicyNet policy_;
  ValueEnsemble ensemble_;
  AdamOptimizer optimizer_;
  RolloutBuffers buffers_;
  InfluenceState influence_;
  std::optional<MppiPlanner> planner_;
  RngStream policy_rng_, noise_rng_, env_rng_, select_rng_, update_rng_;
  Vec current_obs_;
  int steps_since_update_ = 0;
  std::uint64_t eval_counter_ = 0;
};

}  // namespace hrlmppi
