#pragma once

#include <string>
#include <vector>

#include "hrlmppi/welch.hpp"

namespace hrlmppi {

struct SummaryRow {
  std::string env, label;
  int runs = 0;
  int episodes = 0;
  double success_mean = 0, success_std = 0;
  double step_mean = 0, step_std = 0;
  double reward_mean = 0, reward_std = 0;
  double dist_mean = 0, dist_std = 0;  // lander
  double cot_mean = 0, cot_std = 0;    // racing collision/off-track
  double danger_mean = 0, danger_std = 0;
  bool has_dist = false, has_cot = false;
};

struct WelchRow {
  std::string env, baseline, setting;
  WelchResult result;
};

struct AnalysisResult {
  std::vector<SummaryRow> summary;
  std::vector<WelchRow> welch;
  std::vector<std::string> issues;  // per-file problems, non-fatal
};

// Directories (recursively) under root that contain an eval.csv.
std::vector<std::string> find_run_dirs(const std::string& root);

// Pools evaluation episodes per (env, label) group; labels come from the
// config.cfg saved next to each run's outputs.
AnalysisResult aggregate(const std::vector<std::string>& run_dirs);

void write_summary_csv(const AnalysisResult& result, const std::string& path);
void write_welch_csv(const AnalysisResult& result, const std::string& path);

// Training curves resampled onto a shared step grid, grouped by label.
struct CurveGroup {
  std::string label;
  std::vector<double> grid, mean, stddev;
  int runs = 0;
};
std::vector<CurveGroup> resample_curves(const std::vector<std::string>& run_dirs,
                                        const std::string& column, int n_grid = 200);

}  // namespace hrlmppi
