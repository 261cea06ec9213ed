#pragma once

#include <span>
#include <vector>

#include "hrlmppi/mlp.hpp"
#include "hrlmppi/rng.hpp"

namespace hrlmppi {

// Welford running mean/variance used to normalize value-net inputs.
class RunningNorm {
 public:
  RunningNorm() = default;
  explicit RunningNorm(int dim)
      : mean_(Vec::Zero(dim)), m2_(Vec::Zero(dim)), count_(0) {}

  void update(const Vec& x);
  Vec normalize(const Vec& x) const;
  Mat normalize_batch(const Mat& X) const;

  int dim() const { return static_cast<int>(mean_.size()); }
  double count() const { return count_; }
  const Vec& mean() const { return mean_; }
  const Vec& m2() const { return m2_; }
  void restore(double count, Vec mean, Vec m2);

 private:
  Vec variance() const;
  Vec mean_, m2_;
  double count_ = 0;
};

// D independent value heads over a shared input normalizer. Heads differ
// only by their initialization stream.
class ValueEnsemble {
 public:
  ValueEnsemble() = default;
  ValueEnsemble(int obs_dim, const std::vector<int>& hidden, int n_heads,
                std::uint64_t seed);

  int n_heads() const { return static_cast<int>(heads_.size()); }
  int obs_dim() const { return heads_.front().in_dim(); }

  double value(const Vec& obs) const;   // ensemble mean
  Vec head_values(const Vec& obs) const;
  Mat values_batch(const Mat& obs) const;  // B x D
  Vec mean_values_batch(const Mat& obs) const;

  struct Stats {
    Vec mean;          // per sample
    Vec var;           // per sample, population variance across heads
    double sigma2_bar; // batch mean of per-sample variance
  };
  // Errors on an empty batch.
  Stats stats(const Mat& obs_batch) const;

  struct BatchCache {
    std::vector<Mlp::BatchCache> head_caches;
    Mat values;  // B x D
  };
  Mat values_batch(const Mat& obs, BatchCache& cache) const;
  // dV: B x D gradient w.r.t. each head output; accumulates into grad.
  void backward_batch(const BatchCache& cache, const Mat& dV,
                      std::span<double> grad) const;

  std::size_t param_count() const;
  void get_params(std::span<double> out) const;
  void set_params(std::span<const double> in);

  RunningNorm& norm() { return norm_; }
  const RunningNorm& norm() const { return norm_; }

  const std::vector<Mlp>& heads() const { return heads_; }

 private:
  std::vector<Mlp> heads_;
  RunningNorm norm_;
};

// Per-sample mean/variance across ensemble heads for a precomputed value
// matrix (batch x heads), population variance. This is the aggregation the
// adaptive influence update consumes.
ValueEnsemble::Stats ensemble_stats(const Mat& values);

}  // namespace hrlmppi
