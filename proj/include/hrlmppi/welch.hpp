#pragma once

#include <vector>

#include "hrlmppi/common.hpp"

namespace hrlmppi {

struct WelchResult {
  double t = 0;   // sign convention: first sample minus second
  double df = 0;  // Welch-Satterthwaite degrees of freedom
  double p = 1;   // two-sided
};

// Welch's unequal-variance t-test. Needs at least two values per sample.
WelchResult welch_t(const std::vector<double>& a, const std::vector<double>& b);

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);

// Two-sided p-value for a t statistic with df degrees of freedom.
double student_t_two_sided_p(double t, double df);

}  // namespace hrlmppi
