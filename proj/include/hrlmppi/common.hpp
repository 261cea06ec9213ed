#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hrlmppi {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Fixed-capacity vector for planner-side states/controls. Avoids heap
// traffic in the rollout hot loop; capacity covers the largest model state.
using SVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 32, 1>;

struct DimensionError : std::runtime_error {
  explicit DimensionError(const std::string& what) : std::runtime_error(what) {}
};

struct EmptyBufferError : std::runtime_error {
  explicit EmptyBufferError(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

inline bool is_finite(double x) { return std::isfinite(x); }

// Wrap an angle to (-pi, pi].
inline double wrap_angle(double a) {
  a = std::fmod(a + M_PI, 2.0 * M_PI);
  if (a < 0) a += 2.0 * M_PI;
  return a - M_PI;
}

inline double clamp(double x, double lo, double hi) {
  return x < lo ? lo : (x > hi ? hi : x);
}

}  // namespace hrlmppi
