#include "hrlmppi/config.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace hrlmppi {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  const auto b = s.find_last_not_of(" \t\r");
  return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
}

struct KeyValue {
  std::string value;
  int line = 0;
};

using KvMap = std::map<std::string, KeyValue>;

KvMap tokenize(const std::string& text, const std::string& origin) {
  KvMap kv;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    if (kv.count(key))
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
    kv[key] = {value, lineno};
  }
  return kv;
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
  throw ConfigError(origin + ":" + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& origin, int line, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    fail(origin, line, "expected a number, got '" + v + "'");
  }
}

long parse_long(const std::string& origin, int line, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    fail(origin, line, "expected an integer, got '" + v + "'");
  }
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(v);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace

std::string default_label(const RunConfig& cfg) {
  if (cfg.mode == RunMode::kPpoBaseline) return "ppo";
  std::string label = "ppo-mppi";
  if (cfg.influence.mode == RhoMode::kAdaptive) {
    label += "-adaptive-rho" + fmt_double(cfg.influence.rho0) + "-lambda" +
             fmt_double(cfg.influence.lambda);
  } else {
    label += "-rho" + fmt_double(cfg.influence.rho0);
  }
  if (cfg.influence.application == MixApplication::kDistribution) label += "-dist";
  return label;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config: " + path);
  std::stringstream buf;
  buf << is.rdbuf();
  return parse_config_text(buf.str(), path);
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  const KvMap kv = tokenize(text, origin);
  auto provided = [&](const std::string& key) { return kv.count(key) > 0; };

  RunConfig cfg;

  // environment and cost form first: several defaults depend on them
  if (provided("env")) {
    const auto& e = kv.at("env");
    if (e.value != "acrobot" && e.value != "lander" && e.value != "racing")
      fail(origin, e.line, "env must be acrobot, lander or racing");
    cfg.env = e.value;
  }
  if (provided("mode")) {
    const auto& e = kv.at("mode");
    try {
      cfg.mode = parse_run_mode(e.value);
    } catch (const std::exception& ex) {
      fail(origin, e.line, ex.what());
    }
  }
  if (provided("cost.rl_form")) {
    const auto& e = kv.at("cost.rl_form");
    try {
      cfg.rl_form = parse_rl_cost_form(e.value);
    } catch (const std::exception& ex) {
      fail(origin, e.line, ex.what());
    }
  }

  std::set<std::string> known = {"env", "mode", "cost.rl_form"};
  auto take_double = [&](const std::string& key, double* dst) {
    known.insert(key);
    if (!provided(key)) return false;
    *dst = parse_double(origin, kv.at(key).line, kv.at(key).value);
    return true;
  };
  auto take_int = [&](const std::string& key, int* dst) {
    known.insert(key);
    if (!provided(key)) return false;
    *dst = static_cast<int>(parse_long(origin, kv.at(key).line, kv.at(key).value));
    return true;
  };
  auto take_long = [&](const std::string& key, long* dst) {
    known.insert(key);
    if (!provided(key)) return false;
    *dst = parse_long(origin, kv.at(key).line, kv.at(key).value);
    return true;
  };
  auto take_string = [&](const std::string& key, std::string* dst) {
    known.insert(key);
    if (!provided(key)) return false;
    *dst = kv.at(key).value;
    return true;
  };
  auto take_opt = [&](const std::string& key, std::optional<double>* dst) {
    known.insert(key);
    if (!provided(key)) return false;
    *dst = parse_double(origin, kv.at(key).line, kv.at(key).value);
    return true;
  };

  take_string("out_dir", &cfg.out_dir);
  take_string("label", &cfg.label);
  take_string("track_file", &cfg.env_options.track_file);
  take_double("passing_coef", &cfg.env_options.passing_coef);

  known.insert("seeds");
  if (provided("seeds")) {
    cfg.seeds.clear();
    for (const auto& s : split_list(kv.at("seeds").value))
      cfg.seeds.push_back(
          static_cast<std::uint64_t>(parse_long(origin, kv.at("seeds").line, s)));
    if (cfg.seeds.empty()) fail(origin, kv.at("seeds").line, "seeds list is empty");
  }

  // danger-zone override: x, y plus size (square) or width and height
  {
    double zx = 0, zy = 0, zsize = 0, zw = 0, zh = 0;
    const bool has_x = take_double("zone.x", &zx);
    const bool has_y = take_double("zone.y", &zy);
    const bool has_size = take_double("zone.size", &zsize);
    const bool has_w = take_double("zone.width", &zw);
    const bool has_h = take_double("zone.height", &zh);
    if (has_x || has_y || has_size || has_w || has_h) {
      const int line = kv.at(has_x ? "zone.x" : has_y ? "zone.y"
                                    : has_size       ? "zone.size"
                                    : has_w          ? "zone.width"
                                                     : "zone.height")
                           .line;
      if (!has_x || !has_y) fail(origin, line, "zone override needs zone.x and zone.y");
      if (has_size == (has_w || has_h))
        fail(origin, line, "zone override needs zone.size or zone.width + zone.height");
      if (!has_size && (!has_w || !has_h))
        fail(origin, line, "zone override needs both zone.width and zone.height");
      cfg.env_options.zone_override = true;
      cfg.env_options.zone = has_size ? DangerZone::square(zx, zy, zsize)
                                      : DangerZone{zx, zy, zw, zh};
      if (cfg.env_options.zone.width <= 0 || cfg.env_options.zone.height <= 0)
        fail(origin, line, "zone dimensions must be positive");
    }
  }

  take_int("mppi.num_samples", &cfg.mppi.num_samples);
  const bool horizon_set = take_int("mppi.horizon", &cfg.mppi.horizon);
  known.insert("mppi.noise_sigma");
  if (provided("mppi.noise_sigma")) {
    const auto& e = kv.at("mppi.noise_sigma");
    const auto items = split_list(e.value);
    cfg.mppi.noise_sigma.resize(items.size());
    for (std::size_t i = 0; i < items.size(); ++i)
      cfg.mppi.noise_sigma[i] = parse_double(origin, e.line, items[i]);
  }
  take_double("mppi.lambda", &cfg.mppi.temperature);

  bool w_rl_set = take_double("cost.w_rl", &cfg.cost.w_rl);
  bool w_danger_set = take_double("cost.w_danger", &cfg.cost.w_danger);
  bool w_act_set = take_double("cost.w_act", &cfg.cost.w_act);
  bool w_y_set = take_double("cost.w_y", &cfg.cost.w_y);
  bool w_bound_set = take_double("cost.w_bound", &cfg.cost.w_bound);
  bool w_coll_set = take_double("cost.w_coll", &cfg.cost.w_coll);
  cfg.cost.form = cfg.rl_form;

  take_double("ppo.learning_rate", &cfg.ppo.learning_rate);
  take_int("ppo.n_steps", &cfg.ppo.n_steps);
  take_int("ppo.batch_size", &cfg.ppo.batch_size);
  take_int("ppo.n_epochs", &cfg.ppo.n_epochs);
  take_double("ppo.gamma", &cfg.ppo.gamma);
  take_double("ppo.gae_lambda", &cfg.ppo.gae_lambda);
  take_double("ppo.clip_range", &cfg.ppo.clip_range);
  take_double("ppo.ent_coef", &cfg.ppo.ent_coef);
  take_double("ppo.vf_coef", &cfg.ppo.vf_coef);
  take_double("ppo.max_grad_norm", &cfg.ppo.max_grad_norm);

  known.insert("rho.mode");
  if (provided("rho.mode")) {
    const auto& e = kv.at("rho.mode");
    if (e.value == "fixed")
      cfg.influence.mode = RhoMode::kFixed;
    else if (e.value == "adaptive")
      cfg.influence.mode = RhoMode::kAdaptive;
    else
      fail(origin, e.line, "rho.mode must be fixed or adaptive");
  }
  known.insert("rho.application");
  if (provided("rho.application")) {
    const auto& e = kv.at("rho.application");
    if (e.value == "loss")
      cfg.influence.application = MixApplication::kLossWeighting;
    else if (e.value == "distribution")
      cfg.influence.application = MixApplication::kDistribution;
    else
      fail(origin, e.line, "rho.application must be loss or distribution");
  }
  if (take_double("rho.value", &cfg.influence.rho0)) {
    if (cfg.influence.rho0 < 0 || cfg.influence.rho0 > 1)
      fail(origin, kv.at("rho.value").line, "rho.value must be in [0, 1]");
  }
  cfg.influence.rho = cfg.influence.rho0;
  if (take_double("rho.lambda", &cfg.influence.lambda)) {
    if (!(cfg.influence.lambda >= 0 && cfg.influence.lambda < 1))
      fail(origin, kv.at("rho.lambda").line, "rho.lambda must be in [0, 1)");
  }
  if (take_double("rho.omega0", &cfg.influence.omega0)) {
    if (cfg.influence.omega0 < 0)
      fail(origin, kv.at("rho.omega0").line, "rho.omega0 must be >= 0");
  }
  cfg.influence.omega_ema = cfg.influence.omega0;

  take_long("trainer.total_steps", &cfg.trainer.total_steps);
  take_int("trainer.candidates", &cfg.trainer.candidates);
  const bool period_set = take_int("trainer.update_period", &cfg.trainer.update_period);
  take_int("trainer.eval_episodes", &cfg.trainer.eval_episodes);
  take_long("trainer.eval_interval", &cfg.trainer.eval_interval);
  take_double("trainer.target_success", &cfg.trainer.target_success);

  take_int("net.ensemble_heads", &cfg.ensemble_heads);
  known.insert("net.hidden");
  if (provided("net.hidden")) {
    const auto& e = kv.at("net.hidden");
    cfg.hidden.clear();
    for (const auto& s : split_list(e.value))
      cfg.hidden.push_back(static_cast<int>(parse_long(origin, e.line, s)));
    if (cfg.hidden.empty()) fail(origin, e.line, "net.hidden must list layer sizes");
  }

  take_opt("bound.rho", &cfg.bound.rho);
  take_opt("bound.alpha_p", &cfg.bound.alpha_p);
  take_opt("bound.alpha_r", &cfg.bound.alpha_r);
  take_opt("bound.gamma", &cfg.bound.gamma);
  known.insert("bound.horizon");
  if (provided("bound.horizon"))
    cfg.bound.horizon = static_cast<int>(
        parse_long(origin, kv.at("bound.horizon").line, kv.at("bound.horizon").value));
  take_opt("bound.span_r", &cfg.bound.span_r);
  take_opt("bound.r_max", &cfg.bound.r_max);
  take_opt("bound.span_g", &cfg.bound.span_g);
  take_opt("bound.d_u", &cfg.bound.d_u);
  take_opt("bound.lambda_max", &cfg.bound.lambda_max);

  for (const auto& [key, e] : kv)
    if (!known.count(key)) fail(origin, e.line, "unknown key '" + key + "'");

  // env- and form-dependent defaults for anything not set explicitly
  if (!horizon_set)
    cfg.mppi.horizon = form_has_quadratic(cfg.rl_form) ? (cfg.env == "racing" ? 2 : 3) : 10;
  if (cfg.env == "acrobot") {
    if (!w_rl_set) cfg.cost.w_rl = 50.0;
    if (!w_danger_set) cfg.cost.w_danger = 50.0;
  } else if (cfg.env == "lander") {
    if (!w_rl_set) cfg.cost.w_rl = 50.0;
    if (!w_danger_set) cfg.cost.w_danger = 400.0;
    if (!w_act_set) cfg.cost.w_act = 20.0;
    if (!w_y_set) cfg.cost.w_y = 10.0;
  } else {
    if (!w_rl_set) cfg.cost.w_rl = 1.0;
    if (!w_danger_set) cfg.cost.w_danger = 300.0;
    if (!w_bound_set) cfg.cost.w_bound = 500.0;
    if (!w_coll_set) cfg.cost.w_coll = 300.0;
  }
  if (!period_set)
    cfg.trainer.update_period =
        cfg.mode == RunMode::kPpoBaseline
            ? cfg.ppo.n_steps
            : std::max(1, cfg.ppo.n_steps / cfg.trainer.candidates);
  cfg.trainer.mode = cfg.mode;
  if (cfg.label.empty()) cfg.label = default_label(cfg);

  // final structural validation
  try {
    cfg.ppo.validate();
    cfg.trainer.validate();
    cfg.mppi.validate(cfg.env == "acrobot" ? 1 : 2);
  } catch (const std::exception& ex) {
    throw ConfigError(origin + ": " + ex.what());
  }
  if (cfg.cost.w_rl < 0 || cfg.cost.w_danger < 0 || cfg.cost.w_act < 0 ||
      cfg.cost.w_y < 0 || cfg.cost.w_bound < 0 || cfg.cost.w_coll < 0)
    throw ConfigError(origin + ": cost weights must be >= 0");
  if (cfg.ensemble_heads < 2)
    throw ConfigError(origin + ": net.ensemble_heads must be >= 2");
  return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream os;
  os << "env = " << cfg.env << "\n";
  os << "mode = " << to_string(cfg.mode) << "\n";
  os << "label = " << cfg.label << "\n";
  os << "out_dir = " << cfg.out_dir << "\n";
  os << "seeds = ";
  for (std::size_t i = 0; i < cfg.seeds.size(); ++i)
    os << (i ? "," : "") << cfg.seeds[i];
  os << "\n";
  if (!cfg.env_options.track_file.empty())
    os << "track_file = " << cfg.env_options.track_file << "\n";
  os << "passing_coef = " << fmt_double(cfg.env_options.passing_coef) << "\n";
  if (cfg.env_options.zone_override) {
    os << "zone.x = " << fmt_double(cfg.env_options.zone.cx) << "\n";
    os << "zone.y = " << fmt_double(cfg.env_options.zone.cy) << "\n";
    os << "zone.width = " << fmt_double(cfg.env_options.zone.width) << "\n";
    os << "zone.height = " << fmt_double(cfg.env_options.zone.height) << "\n";
  }
  os << "mppi.num_samples = " << cfg.mppi.num_samples << "\n";
  os << "mppi.horizon = " << cfg.mppi.horizon << "\n";
  if (cfg.mppi.noise_sigma.size() > 0) {
    os << "mppi.noise_sigma = ";
    for (int i = 0; i < cfg.mppi.noise_sigma.size(); ++i)
      os << (i ? "," : "") << fmt_double(cfg.mppi.noise_sigma[i]);
    os << "\n";
  }
  os << "mppi.lambda = " << fmt_double(cfg.mppi.temperature) << "\n";
  os << "cost.rl_form = " << to_string(cfg.rl_form) << "\n";
  os << "cost.w_rl = " << fmt_double(cfg.cost.w_rl) << "\n";
  os << "cost.w_danger = " << fmt_double(cfg.cost.w_danger) << "\n";
  os << "cost.w_act = " << fmt_double(cfg.cost.w_act) << "\n";
  os << "cost.w_y = " << fmt_double(cfg.cost.w_y) << "\n";
  os << "cost.w_bound = " << fmt_double(cfg.cost.w_bound) << "\n";
  os << "cost.w_coll = " << fmt_double(cfg.cost.w_coll) << "\n";
  os << "ppo.learning_rate = " << fmt_double(cfg.ppo.learning_rate) << "\n";
  os << "ppo.n_steps = " << cfg.ppo.n_steps << "\n";
  os << "ppo.batch_size = " << cfg.ppo.batch_size << "\n";
  os << "ppo.n_epochs = " << cfg.ppo.n_epochs << "\n";
  os << "ppo.gamma = " << fmt_double(cfg.ppo.gamma) << "\n";
  os << "ppo.gae_lambda = " << fmt_double(cfg.ppo.gae_lambda) << "\n";
  os << "ppo.clip_range = " << fmt_double(cfg.ppo.clip_range) << "\n";
  os << "ppo.ent_coef = " << fmt_double(cfg.ppo.ent_coef) << "\n";
  os << "ppo.vf_coef = " << fmt_double(cfg.ppo.vf_coef) << "\n";
  os << "ppo.max_grad_norm = " << fmt_double(cfg.ppo.max_grad_norm) << "\n";
  os << "rho.mode = " << (cfg.influence.mode == RhoMode::kAdaptive ? "adaptive" : "fixed")
     << "\n";
  os << "rho.application = "
     << (cfg.influence.application == MixApplication::kDistribution ? "distribution"
                                                                    : "loss")
     << "\n";
  os << "rho.value = " << fmt_double(cfg.influence.rho0) << "\n";
  os << "rho.lambda = " << fmt_double(cfg.influence.lambda) << "\n";
  os << "rho.omega0 = " << fmt_double(cfg.influence.omega0) << "\n";
  os << "trainer.total_steps = " << cfg.trainer.total_steps << "\n";
  os << "trainer.candidates = " << cfg.trainer.candidates << "\n";
  os << "trainer.update_period = " << cfg.trainer.update_period << "\n";
  os << "trainer.eval_episodes = " << cfg.trainer.eval_episodes << "\n";
  os << "trainer.eval_interval = " << cfg.trainer.eval_interval << "\n";
  os << "trainer.target_success = " << fmt_double(cfg.trainer.target_success) << "\n";
  os << "net.ensemble_heads = " << cfg.ensemble_heads << "\n";
  os << "net.hidden = ";
  for (std::size_t i = 0; i < cfg.hidden.size(); ++i)
    os << (i ? "," : "") << cfg.hidden[i];
  os << "\n";
  auto put_opt = [&](const char* key, const std::optional<double>& v) {
    if (v) os << key << " = " << fmt_double(*v) << "\n";
  };
  put_opt("bound.rho", cfg.bound.rho);
  put_opt("bound.alpha_p", cfg.bound.alpha_p);
  put_opt("bound.alpha_r", cfg.bound.alpha_r);
  put_opt("bound.gamma", cfg.bound.gamma);
  if (cfg.bound.horizon) os << "bound.horizon = " << *cfg.bound.horizon << "\n";
  put_opt("bound.span_r", cfg.bound.span_r);
  put_opt("bound.r_max", cfg.bound.r_max);
  put_opt("bound.span_g", cfg.bound.span_g);
  put_opt("bound.d_u", cfg.bound.d_u);
  put_opt("bound.lambda_max", cfg.bound.lambda_max);
  return os.str();
}

TrainSetup make_setup(const RunConfig& cfg, std::uint64_t seed) {
  TrainSetup setup;
  setup.env_name = cfg.env;
  setup.env_options = cfg.env_options;
  setup.rl_form = cfg.rl_form;
  setup.mppi = cfg.mppi;
  setup.cost = cfg.cost;
  setup.ppo = cfg.ppo;
  setup.trainer = cfg.trainer;
  setup.trainer.seed = seed;
  setup.influence = cfg.influence;
  setup.influence.rho = cfg.influence.rho0;
  setup.influence.omega_ema = cfg.influence.omega0;
  setup.ensemble_heads = cfg.ensemble_heads;
  setup.hidden = cfg.hidden;
  return setup;
}

}  // namespace hrlmppi
