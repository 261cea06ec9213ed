#include "hrlmppi/mlp.hpp"

#include <Eigen/QR>

namespace hrlmppi {

Mat orthogonal_init(int rows, int cols, double gain, RngStream& rng) {
  const int n = std::max(rows, cols);
  const int m = std::min(rows, cols);
  Mat a(n, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n; ++i) a(i, j) = rng.gaussian();
  Eigen::HouseholderQR<Mat> qr(a);
  Mat q = qr.householderQ() * Mat::Identity(n, m);
  // Fix signs so the factorization is unique.
  Mat r = qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();
  for (int j = 0; j < m; ++j)
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  Mat w = (rows >= cols) ? q : Mat(q.transpose());
  return gain * w;
}

Mlp::Mlp(std::vector<int> sizes, RngStream& rng, std::vector<double> gains)
    : sizes_(std::move(sizes)) {
  if (sizes_.size() < 2) throw DimensionError("Mlp needs at least one layer");
  const int L = static_cast<int>(sizes_.size()) - 1;
  if (gains.empty()) {
    gains.assign(L, std::sqrt(2.0));
    gains.back() = 1.0;
  }
  if (static_cast<int>(gains.size()) != L)
    throw DimensionError("Mlp: one gain per layer expected");
  weights_.reserve(L);
  biases_.reserve(L);
  for (int l = 0; l < L; ++l) {
    weights_.push_back(orthogonal_init(sizes_[l + 1], sizes_[l], gains[l], rng));
    biases_.push_back(Vec::Zero(sizes_[l + 1]));
    n_params_ += static_cast<std::size_t>(sizes_[l + 1]) * sizes_[l] + sizes_[l + 1];
  }
}

Vec Mlp::forward(const Vec& x) const {
  if (x.size() != in_dim()) throw DimensionError("Mlp forward: input dimension mismatch");
  Vec h = x;
  const int L = n_layers();
  for (int l = 0; l < L; ++l) {
    h = weights_[l] * h + biases_[l];
    if (l + 1 < L) h = h.array().tanh();
  }
  return h;
}

Mat Mlp::forward_batch(const Mat& X) const {
  BatchCache cache;
  return forward_batch(X, cache);
}

Mat Mlp::forward_batch(const Mat& X, BatchCache& cache) const {
  if (X.cols() != in_dim()) throw DimensionError("Mlp forward: input dimension mismatch");
  cache.input = X;
  cache.post.resize(n_layers());
  Mat h = X;
  const int L = n_layers();
  for (int l = 0; l < L; ++l) {
    h = (h * weights_[l].transpose()).rowwise() + biases_[l].transpose();
    if (l + 1 < L) h = h.array().tanh();
    cache.post[l] = h;
  }
  return h;
}

Mat Mlp::backward_batch(const BatchCache& cache, const Mat& dY,
                        std::span<double> grad) const {
  if (grad.size() != n_params_) throw DimensionError("Mlp backward: gradient buffer size mismatch");
  const int L = n_layers();
  Mat delta = dY;  // dL/d(pre-activation of layer l), walking backwards
  std::size_t offset = n_params_;
  Mat dX;
  for (int l = L - 1; l >= 0; --l) {
    if (l + 1 < L) {
      // undo tanh of layer l (cache.post[l] holds the activation)
      delta = delta.array() * (1.0 - cache.post[l].array().square());
    }
    const Mat& in = (l == 0) ? cache.input : cache.post[l - 1];
    const std::size_t wn = static_cast<std::size_t>(weights_[l].size());
    const std::size_t bn = static_cast<std::size_t>(biases_[l].size());
    offset -= wn + bn;
    Eigen::Map<Mat> dW(grad.data() + offset, weights_[l].rows(), weights_[l].cols());
    Eigen::Map<Vec> db(grad.data() + offset + wn, biases_[l].size());
    dW += delta.transpose() * in;
    db += delta.colwise().sum();
    if (l > 0)
      delta = (delta * weights_[l]).eval();
    else
      dX = delta * weights_[l];
  }
  return dX;
}

void Mlp::get_params(std::span<double> out) const {
  if (out.size() != n_params_) throw DimensionError("Mlp get_params: buffer size mismatch");
  std::size_t offset = 0;
  for (int l = 0; l < n_layers(); ++l) {
    std::copy(weights_[l].data(), weights_[l].data() + weights_[l].size(), out.data() + offset);
    offset += weights_[l].size();
    std::copy(biases_[l].data(), biases_[l].data() + biases_[l].size(), out.data() + offset);
    offset += biases_[l].size();
  }
}

void Mlp::set_params(std::span<const double> in) {
  if (in.size() != n_params_) throw DimensionError("Mlp set_params: buffer size mismatch");
  std::size_t offset = 0;
  for (int l = 0; l < n_layers(); ++l) {
    std::copy(in.data() + offset, in.data() + offset + weights_[l].size(), weights_[l].data());
    offset += weights_[l].size();
    std::copy(in.data() + offset, in.data() + offset + biases_[l].size(), biases_[l].data());
    offset += biases_[l].size();
  }
}

}  // namespace hrlmppi
