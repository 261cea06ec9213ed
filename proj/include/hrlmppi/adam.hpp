#pragma once

#include <span>

#include "hrlmppi/common.hpp"

namespace hrlmppi {

// Adaptive-moment optimizer over a flat parameter vector.
class AdamOptimizer {
 public:
  AdamOptimizer() = default;
  explicit AdamOptimizer(std::size_t n, double lr = 3e-4, double beta1 = 0.9,
                         double beta2 = 0.999, double eps = 1e-8)
      : m_(Vec::Zero(n)), v_(Vec::Zero(n)), lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

  // Applies one update in place. A non-finite gradient aborts the update and
  // returns false with parameters and moments untouched.
  bool step(std::span<double> params, std::span<const double> grads);

  double lr() const { return lr_; }
  void set_lr(double lr) { lr_ = lr; }
  std::size_t size() const { return static_cast<std::size_t>(m_.size()); }

 private:
  Vec m_, v_;
  double lr_ = 3e-4, beta1_ = 0.9, beta2_ = 0.999, eps_ = 1e-8;
  long t_ = 0;
};

// Scales `grads` in place so its l2 norm does not exceed `max_norm`.
void clip_grad_norm(std::span<double> grads, double max_norm);

}  // namespace hrlmppi
