#include "hrlmppi/trainer.hpp"

#include <filesystem>

#include "hrlmppi/csv.hpp"

namespace hrlmppi {

RunMode parse_run_mode(const std::string& s) {
  if (s == "ppo-baseline") return RunMode::kPpoBaseline;
  if (s == "ppo-mppi") return RunMode::kPpoMppi;
  throw ConfigError("unknown mode: " + s);
}

std::string to_string(RunMode mode) {
  return mode == RunMode::kPpoBaseline ? "ppo-baseline" : "ppo-mppi";
}

void TrainerConfig::validate() const {
  if (total_steps < 1) throw ConfigError("trainer: total_steps must be >= 1");
  if (candidates < 1) throw ConfigError("trainer: candidates must be >= 1");
  if (update_period < 1) throw ConfigError("trainer: update_period must be >= 1");
  if (eval_episodes < 1) throw ConfigError("trainer: eval_episodes must be >= 1");
  if (eval_interval < 0) throw ConfigError("trainer: eval_interval must be >= 0");
}

double EvalReport::success_rate() const {
  if (episodes.empty()) return 0;
  double n = 0;
  for (const auto& e : episodes) n += e.success ? 1.0 : 0.0;
  return n / episodes.size();
}

double EvalReport::mean_reward() const {
  if (episodes.empty()) return 0;
  double s = 0;
  for (const auto& e : episodes) s += e.reward;
  return s / episodes.size();
}

double EvalReport::mean_length() const {
  if (episodes.empty()) return 0;
  double s = 0;
  for (const auto& e : episodes) s += e.length;
  return s / episodes.size();
}

double EvalReport::mean_danger_steps() const {
  if (episodes.empty()) return 0;
  double s = 0;
  for (const auto& e : episodes) s += e.danger_steps;
  return s / episodes.size();
}

Trainer::Trainer(const TrainSetup& setup)
    : setup_(setup),
      env_(make_env(setup.env_name, setup.env_options)),
      influence_(setup.influence),
      policy_rng_(setup.trainer.seed, kStreamPolicy),
      noise_rng_(setup.trainer.seed, kStreamMppiNoise),
      env_rng_(setup.trainer.seed, kStreamEnv),
      select_rng_(setup.trainer.seed, kStreamSelect),
      update_rng_(setup.trainer.seed, kStreamUpdate) {
  setup_.trainer.validate();
  setup_.ppo.validate();
  const EnvSpec& spec = env_->spec();
  const int act_dim = setup_.trainer.mode == RunMode::kPpoBaseline
                          ? spec.control_dim
                          : action_dim_for(spec, setup_.rl_form);
  const Vec lo = Vec::Constant(act_dim, -1.0);
  const Vec hi = Vec::Constant(act_dim, 1.0);
  RngStream init_rng(setup.trainer.seed, kStreamInitBase);
  // baseline actions map directly onto the control box; hierarchical actions
  // live in [-1, 1]^d and are decoded by the cost layer
  policy_ = (setup_.trainer.mode == RunMode::kPpoBaseline)
                ? PolicyNet(spec.obs_dim, act_dim, setup_.hidden, spec.u_lo, spec.u_hi, init_rng)
                : PolicyNet(spec.obs_dim, act_dim, setup_.hidden, lo, hi, init_rng);
  ensemble_ = ValueEnsemble(spec.obs_dim, setup_.hidden, setup_.ensemble_heads,
                            setup.trainer.seed);
  optimizer_ = AdamOptimizer(policy_.param_count() + ensemble_.param_count(),
                             setup_.ppo.learning_rate);
  buffers_.capacity = setup_.trainer.update_period;

  if (setup_.trainer.mode == RunMode::kPpoMppi) {
    CostEvaluator evaluator(&setup_.cost, &env_->model(), &env_->zone(), &ensemble_);
    planner_.emplace(setup_.mppi, &env_->model(), evaluator, &spec, setup_.rl_form);
  }
  current_obs_ = env_->reset(env_rng_);
}

Trainer::StepRecord Trainer::collect_step() {
  StepRecord rec;
  const Vec s_t = current_obs_;
  ensemble_.norm().update(s_t);

  if (setup_.trainer.mode == RunMode::kPpoBaseline) {
    const auto [action, logp] = policy_.sample(s_t, policy_rng_);
    SVec u(action.size());
    for (int d = 0; d < action.size(); ++d) u[d] = action[d];
    const StepResult res = env_->step(u);
    Transition t;
    t.obs = s_t;
    t.action = action;
    t.control = action;
    t.reward = res.reward;
    t.obs_next = res.obs;
    t.done = res.done;
    t.log_pi_old = logp;
    t.in_danger = res.in_danger;
    buffers_.push(t);
    rec.reward = res.reward;
    rec.done = res.done;
    rec.success = res.success;
    rec.in_danger = res.in_danger;
    current_obs_ = res.obs;
    if (res.done) current_obs_ = env_->reset(env_rng_);
    ++steps_since_update_;
    return rec;
  }

  const int M = setup_.trainer.candidates;
  const int H = setup_.mppi.horizon;
  std::vector<Vec> actions(M);
  Vec logps(M);
  for (int m = 0; m < M; ++m) {
    auto [a, lp] = policy_.sample(s_t, policy_rng_);
    actions[m] = std::move(a);
    logps[m] = lp;
  }

  const SVec x_t = env_->state();
  const auto plans = planner_->plan(x_t, actions, noise_rng_);
  const int m_star = static_cast<int>(select_rng_.uniform_int(M));
  rec.m_star = m_star;

  SVec u0 = plans[m_star].controls.row(0).transpose();
  const StepResult res = env_->step(u0);
  Transition t;
  t.obs = s_t;
  t.action = actions[m_star];
  t.control = Vec(u0);
  t.reward = res.reward;
  t.obs_next = res.obs;
  t.done = res.done;
  t.log_pi_old = logps[m_star];
  t.in_danger = res.in_danger;
  buffers_.push(t);

  // re-score the unselected candidates into virtual experience
  const auto& model = env_->model();
  for (int m = 0; m < M; ++m) {
    if (m == m_star || plans[m].diverged) continue;
    const auto& plan = plans[m];
    int len = H;
    bool terminal = false;
    for (int tau = 1; tau <= H && tau < static_cast<int>(plan.states.size()); ++tau) {
      if (model.terminal(plan.states[tau])) {
        len = tau;
        terminal = true;
        break;
      }
    }
    len = std::min<int>(len, static_cast<int>(plan.states.size()) - 1);
    if (len < 1) continue;

    Mat vobs(len + 1, s_t.size());
    for (int tau = 0; tau <= len; ++tau)
      vobs.row(tau) = model.observe(plan.states[tau]).transpose();
    const Vec values = ensemble_.mean_values_batch(vobs);
    const double bootstrap = terminal ? 0.0 : values[len];
    std::vector<bool> dones(len, false);
    dones[len - 1] = terminal;
    const GaeResult gae = compute_gae(plan.rewards.head(len), values.head(len),
                                      dones, setup_.ppo.gamma,
                                      setup_.ppo.gae_lambda, bootstrap);

    Mat act_rep(len, actions[m].size());
    for (int tau = 0; tau < len; ++tau) act_rep.row(tau) = actions[m].transpose();
    PolicyNet::BatchCache pcache;
    const Vec logp_virtual =
        policy_.log_prob_batch(vobs.topRows(len), act_rep, pcache);

    for (int tau = 0; tau < len; ++tau) {
      VirtualTransition v;
      v.obs = vobs.row(tau).transpose();
      v.action = actions[m];
      v.control = plan.controls.row(tau).transpose();
      v.reward = plan.rewards[tau];
      v.obs_next = vobs.row(tau + 1).transpose();
      v.done = dones[tau];
      v.log_pi_old = logp_virtual[tau];
      v.v_target = gae.value_targets[tau];
      buffers_.push(v);
      ++rec.virtual_added;
    }
  }

  planner_->advance(plans[m_star]);
  rec.reward = res.reward;
  rec.done = res.done;
  rec.success = res.success;
  rec.in_danger = res.in_danger;
  current_obs_ = res.obs;
  if (res.done) {
    current_obs_ = env_->reset(env_rng_);
    planner_->reset();
  }
  ++steps_since_update_;
  return rec;
}

UpdateStats Trainer::run_update() {
  steps_since_update_ = 0;
  return ppo_update(policy_, ensemble_, optimizer_, buffers_, influence_,
                    setup_.ppo, update_rng_);
}

void Trainer::load(const LoadedCheckpoint& ckpt) {
  if (ckpt.policy.obs_dim() != policy_.obs_dim() ||
      ckpt.policy.act_dim() != policy_.act_dim())
    throw DimensionError("checkpoint policy dimensions do not match this setup");
  if (ckpt.ensemble.obs_dim() != ensemble_.obs_dim())
    throw DimensionError("checkpoint value-net dimensions do not match this setup");
  policy_ = ckpt.policy;
  ensemble_ = ckpt.ensemble;
}

TrainResult Trainer::train(const std::string& out_dir) {
  TrainResult result;
  std::optional<CsvWriter> metrics;
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    metrics.emplace(out_dir + "/metrics.csv",
                    std::vector<std::string>{"kind", "step", "episode", "reward",
                                             "length", "success", "danger_steps",
                                             "rho", "sigma2", "drl_size",
                                             "dmppi_size"});
  }

  double ep_reward = 0;
  int ep_length = 0;
  int ep_danger = 0;
  int episode = 0;
  long step = 0;

  for (step = 1; step <= setup_.trainer.total_steps; ++step) {
    const StepRecord rec = collect_step();
    ep_reward += rec.reward;
    ep_length += 1;
    ep_danger += rec.in_danger ? 1 : 0;

    if (steps_since_update_ >= setup_.trainer.update_period) {
      const UpdateStats st = run_update();
      if (metrics)
        metrics->write_row({"update", std::to_string(step), std::to_string(episode),
                            "", "", "", "", fmt_g9(st.rho), fmt_g9(st.sigma2),
                            std::to_string(st.n_rl), std::to_string(st.n_mppi)});
    }

    if (rec.done) {
      ++episode;
      if (metrics)
        metrics->write_row({"episode", std::to_string(step), std::to_string(episode),
                            fmt_g9(ep_reward), std::to_string(ep_length),
                            rec.success ? "1" : "0", std::to_string(ep_danger),
                            fmt_g9(influence_.rho), fmt_g9(influence_.last_sigma2),
                            "", ""});
      ep_reward = 0;
      ep_length = 0;
      ep_danger = 0;
    }

    if (setup_.trainer.eval_interval > 0 && step % setup_.trainer.eval_interval == 0 &&
        setup_.trainer.target_success > 0) {
      const EvalReport probe = evaluate(setup_.trainer.eval_episodes, ++eval_counter_);
      if (probe.success_rate() >= setup_.trainer.target_success) {
        result.stopped_early = true;
        break;
      }
    }
  }
  result.steps_run = std::min(step, setup_.trainer.total_steps);
  result.episodes = episode;

  result.final_eval = evaluate(setup_.trainer.eval_episodes, 0);
  if (!out_dir.empty()) {
    CsvWriter eval_csv(out_dir + "/eval.csv",
                       {"episode", "reward", "length", "success", "dist_to_goal",
                        "coll_or_offtrack", "danger_steps"});
    for (std::size_t i = 0; i < result.final_eval.episodes.size(); ++i) {
      const auto& e = result.final_eval.episodes[i];
      const bool is_lander = setup_.env_name == "lander";
      const bool is_racing = setup_.env_name == "racing";
      eval_csv.write_row({std::to_string(i), fmt_g9(e.reward), std::to_string(e.length),
                          e.success ? "1" : "0",
                          is_lander ? fmt_g9(e.dist_to_goal) : "",
                          is_racing ? (e.coll_or_offtrack ? "1" : "0") : "",
                          std::to_string(e.danger_steps)});
    }
    save_checkpoint(out_dir + "/checkpoint.bin", policy_, ensemble_,
                    setup_.trainer.seed);
  }
  return result;
}

EvalReport Trainer::evaluate(int episodes, std::uint64_t eval_stream) {
  EvalReport report;
  report.env_name = setup_.env_name;
  auto env = make_env(setup_.env_name, setup_.env_options);
  RngStream env_rng(setup_.trainer.seed, 1000 + 4 * eval_stream);
  RngStream noise_rng(setup_.trainer.seed, 1001 + 4 * eval_stream);

  std::optional<MppiPlanner> planner;
  if (setup_.trainer.mode == RunMode::kPpoMppi) {
    CostEvaluator evaluator(&setup_.cost, &env->model(), &env->zone(), &ensemble_);
    planner.emplace(setup_.mppi, &env->model(), evaluator, &env->spec(), setup_.rl_form);
  }

  for (int ep = 0; ep < episodes; ++ep) {
    Vec obs = env->reset(env_rng);
    if (planner) planner->reset();
    EvalEpisode e;
    for (;;) {
      const Vec action = policy_.mean_action(obs);
      SVec u;
      if (planner) {
        const auto plans = planner->plan(env->state(), {action}, noise_rng);
        u = plans[0].controls.row(0).transpose();
        planner->advance(plans[0]);
      } else {
        u.resize(action.size());
        for (int d = 0; d < action.size(); ++d) u[d] = action[d];
      }
      const StepResult res = env->step(u);
      e.reward += res.reward;
      e.length += 1;
      e.danger_steps += res.in_danger ? 1 : 0;
      obs = res.obs;
      if (res.done) {
        e.success = res.success;
        e.coll_or_offtrack = res.reason == TermReason::kCollision ||
                             res.reason == TermReason::kOfftrack;
        if (setup_.env_name == "lander") {
          const SVec x = env->state();
          e.dist_to_goal = std::sqrt(x[0] * x[0] + x[1] * x[1]);
        }
        break;
      }
    }
    report.episodes.push_back(e);
  }
  return report;
}

}  // namespace hrlmppi
