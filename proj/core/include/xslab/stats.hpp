#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace xslab {

inline double mean(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("mean: empty series");
  double s = 0.0;
  for (double v : x) s += v;
  return s / double(x.size());
}

inline bool all_equal(std::span<const double> x) {
  for (double v : x)
    if (v != x.front()) return false;
  return true;
}

/// Sample variance, N-1 denominator; exactly 0 for a constant series.
inline double sample_variance(std::span<const double> x) {
  if (x.size() < 2) throw std::invalid_argument("sample_variance: need at least 2 observations");
  if (all_equal(x)) return 0.0;
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / double(x.size() - 1);
}

inline double sample_sd(std::span<const double> x) { return std::sqrt(sample_variance(x)); }

/// Median; even-length series take the midpoint of the central pair.
inline double median(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("median: empty series");
  std::vector<double> v(x.begin(), x.end());
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n % 2 == 1) return v[n / 2];
  return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// OLS slope of y on x with intercept: Cov(x, y) / Var(x).
inline double ols_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("ols_slope: length mismatch");
  if (x.size() < 2) throw std::invalid_argument("ols_slope: need at least 2 observations");
  if (all_equal(x)) throw std::invalid_argument("ols_slope: regressor has zero variance");
  const double mx = mean(x);
  const double my = mean(y);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("ols_slope: regressor has zero variance");
  return sxy / sxx;
}

/// Linear-interpolation quantile (R type 7) on a sorted copy; q in [0, 1].
inline double quantile(std::span<const double> x, double q) {
  if (x.empty()) throw std::invalid_argument("quantile: empty series");
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("quantile: q outside [0, 1]");
  std::vector<double> v(x.begin(), x.end());
  std::sort(v.begin(), v.end());
  const double h = q * double(v.size() - 1);
  const std::size_t lo = std::size_t(std::floor(h));
  const std::size_t hi = std::size_t(std::ceil(h));
  return v[lo] + (h - double(lo)) * (v[hi] - v[lo]);
}

}  // namespace xslab
