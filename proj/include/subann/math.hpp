#ifndef SUBANN_MATH_HPP
#define SUBANN_MATH_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace subann {

inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();

/// log(sum(exp(x))) with max-subtraction; -inf entries are skipped.
inline double log_sum_exp(std::span<const double> x) {
  double m = neg_inf;
  for (double v : x) m = std::max(m, v);
  if (m == neg_inf) return neg_inf;
  double s = 0.0;
  for (double v : x) s += std::exp(v - m);
  return m + std::log(s);
}

/// Normalizes log-weights to probabilities in place.
inline void normalize_log_weights(std::span<double> logw) {
  const double lz = log_sum_exp(logw);
  for (double& v : logw) v = std::exp(v - lz);
}

inline double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

inline double log_binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return neg_inf;
  return std::lgamma(double(n) + 1.0) - std::lgamma(double(k) + 1.0) -
         std::lgamma(double(n - k) + 1.0);
}

/// Logistic sigmoid, stable for arguments of either sign.
inline double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

/// log(sigmoid(t)) = -log1p(exp(-t)) without overflow.
inline double log_sigmoid(double t) {
  if (t >= 0.0) return -std::log1p(std::exp(-t));
  return t - std::log1p(std::exp(t));
}

/// Density of the location-scale Student-t: dof nu, location mu, squared scale s2.
inline double student_t_log_pdf(double x, double nu, double mu, double s2) {
  const double z2 = (x - mu) * (x - mu) / s2;
  return std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
         0.5 * std::log(nu * M_PI * s2) -
         0.5 * (nu + 1.0) * std::log1p(z2 / nu);
}

/// Total variation distance between two distributions on a shared grid.
inline double total_variation(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) s += std::abs(a[i] - b[i]);
  for (std::size_t i = n; i < a.size(); ++i) s += std::abs(a[i]);
  for (std::size_t i = n; i < b.size(); ++i) s += std::abs(b[i]);
  return 0.5 * s;
}

struct MeanVariance {
  double mean = 0.0;
  double variance = 0.0;  // population variance
};

inline MeanVariance mean_variance(std::span<const double> x) {
  MeanVariance mv;
  if (x.empty()) return mv;
  for (double v : x) mv.mean += v;
  mv.mean /= double(x.size());
  for (double v : x) mv.variance += (v - mv.mean) * (v - mv.mean);
  mv.variance /= double(x.size());
  return mv;
}

/// Least-squares slope of y against x.
inline double ls_slope(std::span<const double> x, std::span<const double> y) {
  const auto mx = mean_variance(x), my = mean_variance(y);
  double cov = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    cov += (x[i] - mx.mean) * (y[i] - my.mean);
  cov /= double(x.size());
  return cov / mx.variance;
}

}  // namespace subann

#endif  // SUBANN_MATH_HPP
