#include "hrlmppi/aggregate.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>

#include "hrlmppi/csv.hpp"

namespace hrlmppi {

namespace fs = std::filesystem;

namespace {

struct RunMeta {
  std::string env = "unknown";
  std::string label;
};

// Light scan of the saved config for grouping keys only.
RunMeta read_meta(const std::string& dir) {
  RunMeta meta;
  meta.label = fs::path(dir).filename().string();
  std::ifstream is(dir + "/config.cfg");
  if (!is) return meta;
  std::string line;
  while (std::getline(is, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key == "env") meta.env = val;
    if (key == "label") meta.label = val;
  }
  return meta;
}

std::pair<double, double> mean_std(const std::vector<double>& v) {
  if (v.empty()) return {0, 0};
  double m = 0;
  for (double x : v) m += x;
  m /= v.size();
  double s2 = 0;
  for (double x : v) s2 += (x - m) * (x - m);
  return {m, std::sqrt(s2 / v.size())};
}

}  // namespace

std::vector<std::string> find_run_dirs(const std::string& root) {
  std::vector<std::string> dirs;
  if (!fs::exists(root)) return dirs;
  if (fs::exists(fs::path(root) / "eval.csv")) dirs.push_back(root);
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file() && entry.path().filename() == "eval.csv")
      dirs.push_back(entry.path().parent_path().string());
  }
  std::sort(dirs.begin(), dirs.end());
  dirs.erase(std::unique(dirs.begin(), dirs.end()), dirs.end());
  return dirs;
}

AnalysisResult aggregate(const std::vector<std::string>& run_dirs) {
  if (run_dirs.empty()) throw ConfigError("aggregate: no run directories");
  AnalysisResult result;

  struct Group {
    std::string env, label;
    int runs = 0;
    std::vector<double> success, length, reward, dist, cot, danger;
    bool has_dist = false, has_cot = false;
  };
  std::map<std::pair<std::string, std::string>, Group> groups;

  for (const auto& dir : run_dirs) {
    const RunMeta meta = read_meta(dir);
    CsvTable eval;
    try {
      eval = read_csv(dir + "/eval.csv");
    } catch (const std::exception& e) {
      result.issues.push_back(dir + ": " + e.what());
      continue;
    }
    auto& g = groups[{meta.env, meta.label}];
    g.env = meta.env;
    g.label = meta.label;
    ++g.runs;
    for (const char* col : {"reward", "length", "success"}) {
      if (eval.column(col) < 0) {
        result.issues.push_back(dir + "/eval.csv: missing column " + col);
      }
    }
    try {
      auto rewards = eval.numeric_column("reward");
      auto lengths = eval.numeric_column("length");
      auto success = eval.numeric_column("success");
      g.reward.insert(g.reward.end(), rewards.begin(), rewards.end());
      g.length.insert(g.length.end(), lengths.begin(), lengths.end());
      g.success.insert(g.success.end(), success.begin(), success.end());
      if (eval.column("danger_steps") >= 0) {
        auto d = eval.numeric_column("danger_steps");
        g.danger.insert(g.danger.end(), d.begin(), d.end());
      }
      if (eval.column("dist_to_goal") >= 0) {
        auto d = eval.numeric_column("dist_to_goal");
        if (!d.empty()) {
          g.has_dist = true;
          g.dist.insert(g.dist.end(), d.begin(), d.end());
        }
      }
      if (eval.column("coll_or_offtrack") >= 0) {
        auto d = eval.numeric_column("coll_or_offtrack");
        if (!d.empty()) {
          g.has_cot = true;
          g.cot.insert(g.cot.end(), d.begin(), d.end());
        }
      }
    } catch (const std::exception& e) {
      result.issues.push_back(dir + "/eval.csv: " + e.what());
    }
  }

  for (const auto& [key, g] : groups) {
    SummaryRow row;
    row.env = g.env;
    row.label = g.label;
    row.runs = g.runs;
    row.episodes = static_cast<int>(g.reward.size());
    std::tie(row.success_mean, row.success_std) = mean_std(g.success);
    std::tie(row.step_mean, row.step_std) = mean_std(g.length);
    std::tie(row.reward_mean, row.reward_std) = mean_std(g.reward);
    std::tie(row.danger_mean, row.danger_std) = mean_std(g.danger);
    row.has_dist = g.has_dist;
    row.has_cot = g.has_cot;
    if (g.has_dist) std::tie(row.dist_mean, row.dist_std) = mean_std(g.dist);
    if (g.has_cot) std::tie(row.cot_mean, row.cot_std) = mean_std(g.cot);
    result.summary.push_back(row);
  }

  // Welch t over pooled per-episode rewards, every label pair within an env
  for (auto it = groups.begin(); it != groups.end(); ++it) {
    for (auto jt = std::next(it); jt != groups.end(); ++jt) {
      if (it->first.first != jt->first.first) continue;
      const auto& a = it->second;
      const auto& b = jt->second;
      if (a.reward.size() < 2 || b.reward.size() < 2) continue;
      WelchRow row;
      row.env = a.env;
      row.baseline = a.label;
      row.setting = b.label;
      row.result = welch_t(a.reward, b.reward);
      result.welch.push_back(row);
    }
  }
  return result;
}

void write_summary_csv(const AnalysisResult& result, const std::string& path) {
  CsvWriter w(path, {"env", "label", "runs", "episodes", "success_mean",
                     "success_std", "step_mean", "step_std", "reward_mean",
                     "reward_std", "dist_to_goal_mean", "dist_to_goal_std",
                     "coll_or_offtrack_mean", "coll_or_offtrack_std",
                     "danger_steps_mean", "danger_steps_std"});
  for (const auto& r : result.summary) {
    w.write_row({r.env, r.label, std::to_string(r.runs), std::to_string(r.episodes),
                 fmt_g9(r.success_mean), fmt_g9(r.success_std), fmt_g9(r.step_mean),
                 fmt_g9(r.step_std), fmt_g9(r.reward_mean), fmt_g9(r.reward_std),
                 r.has_dist ? fmt_g9(r.dist_mean) : "",
                 r.has_dist ? fmt_g9(r.dist_std) : "",
                 r.has_cot ? fmt_g9(r.cot_mean) : "",
                 r.has_cot ? fmt_g9(r.cot_std) : "", fmt_g9(r.danger_mean),
                 fmt_g9(r.danger_std)});
  }
}

void write_welch_csv(const AnalysisResult& result, const std::string& path) {
  CsvWriter w(path, {"env", "baseline", "setting", "t", "df", "p"});
  for (const auto& r : result.welch)
    w.write_row({r.env, r.baseline, r.setting, fmt_g9(r.result.t),
                 fmt_g9(r.result.df), fmt_g9(r.result.p)});
}

std::vector<CurveGroup> resample_curves(const std::vector<std::string>& run_dirs,
                                        const std::string& column, int n_grid) {
  struct RawCurve {
    std::vector<double> x, y;
  };
  std::map<std::string, std::vector<RawCurve>> by_label;
  double max_common = std::numeric_limits<double>::infinity();

  for (const auto& dir : run_dirs) {
    CsvTable metrics;
    try {
      metrics = read_csv(dir + "/metrics.csv");
    } catch (const std::exception&) {
      continue;
    }
    const int kind_c = metrics.column("kind");
    const int step_c = metrics.column("step");
    const int val_c = metrics.column(column);
    if (kind_c < 0 || step_c < 0 || val_c < 0) continue;
    // rho comes from update rows, episode metrics from episode rows
    const std::string want = (column == "rho" || column == "sigma2") ? "update" : "episode";
    RawCurve c;
    for (const auto& row : metrics.rows) {
      if (row[kind_c] != want) continue;
      if (row[val_c].empty()) continue;
      c.x.push_back(std::stod(row[step_c]));
      c.y.push_back(std::stod(row[val_c]));
    }
    if (c.x.size() < 2) continue;
    max_common = std::min(max_common, c.x.back());
    by_label[read_meta(dir).label].push_back(std::move(c));
  }

  std::vector<CurveGroup> out;
  if (by_label.empty() || !std::isfinite(max_common)) return out;
  for (auto& [label, curves] : by_label) {
    CurveGroup g;
    g.label = label;
    g.runs = static_cast<int>(curves.size());
    g.grid.resize(n_grid);
    g.mean.assign(n_grid, 0);
    g.stddev.assign(n_grid, 0);
    for (int i = 0; i < n_grid; ++i)
      g.grid[i] = max_common * (i + 1) / static_cast<double>(n_grid);
    for (int i = 0; i < n_grid; ++i) {
      std::vector<double> vals;
      for (const auto& c : curves) {
        const double x = g.grid[i];
        // linear interpolation clamped to the curve's range
        auto it = std::lower_bound(c.x.begin(), c.x.end(), x);
        double v;
        if (it == c.x.begin()) {
          v = c.y.front();
        } else if (it == c.x.end()) {
          v = c.y.back();
        } else {
          const auto j = static_cast<std::size_t>(it - c.x.begin());
          const double x0 = c.x[j - 1], x1 = c.x[j];
          const double t = x1 > x0 ? (x - x0) / (x1 - x0) : 0;
          v = c.y[j - 1] + t * (c.y[j] - c.y[j - 1]);
        }
        vals.push_back(v);
      }
      const auto [m, s] = mean_std(vals);
      g.mean[i] = m;
      g.stddev[i] = s;
    }
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace hrlmppi
