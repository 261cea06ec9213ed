#include "hrlmppi/ensemble.hpp"

namespace hrlmppi {

namespace {
constexpr double kNormEps = 1e-8;
}

void RunningNorm::update(const Vec& x) {
  if (x.size() != mean_.size()) throw DimensionError("RunningNorm: dimension mismatch");
  count_ += 1;
  const Vec delta = x - mean_;
  mean_ += delta / count_;
  m2_ += delta.cwiseProduct(x - mean_);
}

Vec RunningNorm::variance() const {
  if (count_ < 2) return Vec::Ones(mean_.size());
  return m2_ / count_;
}

Vec RunningNorm::normalize(const Vec& x) const {
  if (count_ < 2) return x;
  return (x - mean_).cwiseQuotient((variance().array() + kNormEps).sqrt().matrix());
}

Mat RunningNorm::normalize_batch(const Mat& X) const {
  if (count_ < 2) return X;
  const Vec inv_std = (variance().array() + kNormEps).rsqrt();
  return (X.rowwise() - mean_.transpose()).array().rowwise() * inv_std.transpose().array();
}

void RunningNorm::restore(double count, Vec mean, Vec m2) {
  count_ = count;
  mean_ = std::move(mean);
  m2_ = std::move(m2);
}

ValueEnsemble::ValueEnsemble(int obs_dim, const std::vector<int>& hidden,
                             int n_heads, std::uint64_t seed)
    : norm_(obs_dim) {
  if (n_heads < 1) throw DimensionError("ValueEnsemble: needs at least one head");
  std::vector<int> sizes;
  sizes.push_back(obs_dim);
  for (int h : hidden) sizes.push_back(h);
  sizes.push_back(1);
  heads_.reserve(n_heads);
  for (int d = 0; d < n_heads; ++d) {
    RngStream rng(seed, kStreamInitBase + 1 + d);
    heads_.emplace_back(sizes, rng);
  }
}

double ValueEnsemble::value(const Vec& obs) const {
  const Vec x = norm_.normalize(obs);
  double sum = 0;
  for (const auto& head : heads_) sum += head.forward(x)[0];
  return sum / n_heads();
}

Vec ValueEnsemble::head_values(const Vec& obs) const {
  const Vec x = norm_.normalize(obs);
  Vec out(n_heads());
  for (int d = 0; d < n_heads(); ++d) out[d] = heads_[d].forward(x)[0];
  return out;
}

Mat ValueEnsemble::values_batch(const Mat& obs) const {
  const Mat X = norm_.normalize_batch(obs);
  Mat out(obs.rows(), n_heads());
  for (int d = 0; d < n_heads(); ++d) out.col(d) = heads_[d].forward_batch(X);
  return out;
}

Vec ValueEnsemble::mean_values_batch(const Mat& obs) const {
  return values_batch(obs).rowwise().mean();
}

ValueEnsemble::Stats ValueEnsemble::stats(const Mat& obs_batch) const {
  if (obs_batch.rows() == 0) throw EmptyBufferError("ensemble stats: empty batch");
  return ensemble_stats(values_batch(obs_batch));
}

Mat ValueEnsemble::values_batch(const Mat& obs, BatchCache& cache) const {
  const Mat X = norm_.normalize_batch(obs);
  cache.head_caches.resize(n_heads());
  cache.values.resize(obs.rows(), n_heads());
  for (int d = 0; d < n_heads(); ++d)
    cache.values.col(d) = heads_[d].forward_batch(X, cache.head_caches[d]);
  return cache.values;
}

void ValueEnsemble::backward_batch(const BatchCache& cache, const Mat& dV,
                                   std::span<double> grad) const {
  if (grad.size() != param_count()) throw DimensionError("ValueEnsemble backward: grad size mismatch");
  std::size_t offset = 0;
  for (int d = 0; d < n_heads(); ++d) {
    const std::size_t n = heads_[d].param_count();
    heads_[d].backward_batch(cache.head_caches[d], dV.col(d), grad.subspan(offset, n));
    offset += n;
  }
}

std::size_t ValueEnsemble::param_count() const {
  std::size_t n = 0;
  for (const auto& head : heads_) n += head.param_count();
  return n;
}

void ValueEnsemble::get_params(std::span<double> out) const {
  if (out.size() != param_count()) throw DimensionError("ValueEnsemble get_params: size mismatch");
  std::size_t offset = 0;
  for (const auto& head : heads_) {
    head.get_params(out.subspan(offset, head.param_count()));
    offset += head.param_count();
  }
}

void ValueEnsemble::set_params(std::span<const double> in) {
  if (in.size() != param_count()) throw DimensionError("ValueEnsemble set_params: size mismatch");
  std::size_t offset = 0;
  for (auto& head : heads_) {
    head.set_params(in.subspan(offset, head.param_count()));
    offset += head.param_count();
  }
}

ValueEnsemble::Stats ensemble_stats(const Mat& values) {
  if (values.rows() == 0) throw EmptyBufferError("ensemble stats: empty batch");
  const int D = static_cast<int>(values.cols());
  ValueEnsemble::Stats st;
  st.mean = values.rowwise().mean();
  // population variance across heads (divisor D)
  st.var = (values.colwise() - st.mean).array().square().rowwise().sum() / D;
  st.sigma2_bar = st.var.mean();
  return st;
}

}  // namespace hrlmppi
