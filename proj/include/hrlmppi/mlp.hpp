#pragma once

#include <span>
#include <vector>

#include "hrlmppi/common.hpp"
#include "hrlmppi/rng.hpp"

namespace hrlmppi {

// Dense multi-layer perceptron, tanh on hidden layers, identity output.
// Gradients are accumulated into a caller-provided flat buffer laid out in
// declaration order (W0, b0, W1, b1, ...), column-major within each matrix.
class Mlp {
 public:
  Mlp() = default;
  // `gains`: per-layer orthogonal init gain; defaults to sqrt(2) on hidden
  // layers and 1.0 on the output layer when empty.
  Mlp(std::vector<int> sizes, RngStream& rng, std::vector<double> gains = {});

  int in_dim() const { return sizes_.front(); }
  int out_dim() const { return sizes_.back(); }
  int n_layers() const { return static_cast<int>(weights_.size()); }
  const std::vector<int>& sizes() const { return sizes_; }

  Vec forward(const Vec& x) const;

  // Batched forward over rows of X (B x in_dim); returns B x out_dim.
  Mat forward_batch(const Mat& X) const;

  struct BatchCache {
    Mat input;                // B x in
    std::vector<Mat> post;    // activations after each layer (B x n_l)
  };
  Mat forward_batch(const Mat& X, BatchCache& cache) const;

  // dY: B x out_dim gradient of the loss w.r.t. the output. Accumulates
  // parameter gradients into `grad` (size param_count()) and returns the
  // gradient w.r.t. the input rows.
  Mat backward_batch(const BatchCache& cache, const Mat& dY,
                     std::span<double> grad) const;

  std::size_t param_count() const { return n_params_; }
  void get_params(std::span<double> out) const;
  void set_params(std::span<const double> in);

 private:
  std::vector<int> sizes_;
  std::vector<Mat> weights_;  // W_l: sizes_[l+1] x sizes_[l]
  std::vector<Vec> biases_;
  std::size_t n_params_ = 0;
};

// Orthogonal matrix scaled by `gain`, rows x cols.
Mat orthogonal_init(int rows, int cols, double gain, RngStream& rng);

}  // namespace hrlmppi
