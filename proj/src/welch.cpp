#include "hrlmppi/welch.hpp"

namespace hrlmppi {

namespace {

constexpr double kBetaTol = 1e-12;
constexpr int kBetaMaxIter = 500;

// Continued fraction for the incomplete beta (modified Lentz evaluation).
double beta_cf(double a, double b, double x) {
  const double tiny = 1e-300;
  double c = 1.0;
  double d = 1.0 - (a + b) * x / (a + 1.0);
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double f = d;
  for (int m = 1; m <= kBetaMaxIter; ++m) {
    const double m2 = 2.0 * m;
    // even step
    double num = m * (b - m) * x / ((a + m2 - 1.0) * (a + m2));
    d = 1.0 + num * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + num / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    f *= d * c;
    // odd step
    num = -(a + m) * (a + b + m) * x / ((a + m2) * (a + m2 + 1.0));
    d = 1.0 + num * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + num / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    f *= delta;
    if (std::abs(delta - 1.0) < kBetaTol) return f;
  }
  throw NumericError("incomplete_beta: continued fraction did not converge");
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (a <= 0 || b <= 0) throw NumericError("incomplete_beta: a, b must be > 0");
  if (x < 0 || x > 1) throw NumericError("incomplete_beta: x must be in [0, 1]");
  if (x == 0) return 0;
  if (x == 1) return 1;
  const double ln_front = a * std::log(x) + b * std::log1p(-x) -
                          (std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
  if (x < (a + 1.0) / (a + b + 2.0))
    return std::exp(ln_front) * beta_cf(a, b, x) / a;
  return 1.0 - std::exp(b * std::log1p(-x) + a * std::log(x) -
                        (std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b))) *
                   beta_cf(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
  if (df <= 0) throw NumericError("student_t_two_sided_p: df must be > 0");
  if (!is_finite(t)) return 0;
  if (t == 0) return 1;
  const double x = df / (df + t * t);
  return incomplete_beta(0.5 * df, 0.5, x);
}

WelchResult welch_t(const std::vector<double>& a, const std::vector<double>& b) {
  const auto n1 = static_cast<double>(a.size());
  const auto n2 = static_cast<double>(b.size());
  if (a.size() < 2 || b.size() < 2)
    throw DimensionError("welch_t: each sample needs at least 2 values");
  auto mean_var = [](const std::vector<double>& v, double n) {
    double m = 0;
    for (double x : v) m += x;
    m /= n;
    double s2 = 0;
    for (double x : v) s2 += (x - m) * (x - m);
    return std::pair<double, double>(m, s2 / (n - 1.0));  // sample variance
  };
  const auto [m1, v1] = mean_var(a, n1);
  const auto [m2, v2] = mean_var(b, n2);

  WelchResult r;
  const double se2 = v1 / n1 + v2 / n2;
  if (se2 == 0) {
    // zero pooled variance: identical-spread degenerate case
    r.df = n1 + n2 - 2.0;
    if (m1 == m2) {
      r.t = 0;
      r.p = 1;
    } else {
      r.t = m1 > m2 ? std::numeric_limits<double>::infinity()
                    : -std::numeric_limits<double>::infinity();
      r.p = 0;
    }
    return r;
  }
  r.t = (m1 - m2) / std::sqrt(se2);
  r.df = se2 * se2 /
         ((v1 / n1) * (v1 / n1) / (n1 - 1.0) + (v2 / n2) * (v2 / n2) / (n2 - 1.0));
  r.p = student_t_two_sided_p(r.t, r.df);
  return r;
}

}  // namespace hrlmppi
