// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "rlab/verdict.hpp"

namespace rlab {

struct SeriesPoint {
  double n = 0.0;
  double value = 0.0;
};

using Series = std::vector<SeriesPoint>;

struct ExponentFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double predicted = 0.0;
  double tolerance = 0.0;
  bool verdict_match = false;
  double log_coefficient = 0.0;  // coefficient of log log n when a log regressor is used
  bool base2 = false;
};

namespace detail {
inline void check_series(const Series& s, std::size_t min_points) {
  if (s.size() < min_points) throw domain_error("exponent fit needs at least " + std::to_string(min_points) + " points");
  for (const auto& pt : s)
    if (!(pt.value > 0.0) || !std::isfinite(pt.value))
      throw domain_error("nonpositive series value at member n = " + std::to_string(pt.n));
}

inline double r_squared(const std::vector<double>& y, const std::vector<double>& fitted) {
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double ss_tot = 0.0, ss_res = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    ss_tot += (y[i] - mean) * (y[i] - mean);
    ss_res += (y[i] - fitted[i]) * (y[i] - fitted[i]);
  }
  return ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res == 0.0 ? 1.0 : 0.0);
}
}  // namespace detail

// Least squares of log(value) on log(n); with base2 the abscissa is n itself
// and the ordinate log2(value), for families indexed by 2^n.
inline ExponentFit fit_exponent(const Series& s, double predicted, double tolerance, bool base2 = false) {
  detail::check_series(s, 5);
  std::vector<double> x, y;
  for (const auto& pt : s) {
    x.push_back(base2 ? pt.n : std::log(pt.n));
    y.push_back(base2 ? std::log2(pt.value) : std::log(pt.value));
  }
  double n = static_cast<double>(x.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  double den = n * sxx - sx * sx;
  if (den == 0.0) throw domain_error("exponent fit needs distinct abscissae");
  ExponentFit f;
  f.slope = (n * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / n;
  std::vector<double> fitted;
  for (double xi : x) fitted.push_back(f.intercept + f.slope * xi);
  f.r_squared = detail::r_squared(y, fitted);
  f.predicted = predicted;
  f.tolerance = tolerance;
  f.base2 = base2;
  f.verdict_match = std::abs(f.slope - predicted) <= tolerance && f.r_squared >= 0.99;
  return f;
}

// log(value) = c0 + slope log n + c2 log log n; requires n > e.
inline ExponentFit fit_exponent_with_log(const Series& s, double predicted, double tolerance) {
  detail::check_series(s, 5);
  double A[3][3] = {{0}}, b[3] = {0};
  std::vector<std::array<double, 3>> rows;
  std::vector<double> y;
  for (const auto& pt : s) {
    if (!(pt.n > std::exp(1.0))) throw domain_error("log-regressor fit requires n > e");
    std::array<double, 3> r{1.0, std::log(pt.n), std::log(std::log(pt.n))};
    rows.push_back(r);
    y.push_back(std::log(pt.value));
  }
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (int a = 0; a < 3; ++a) {
      b[a] += rows[i][static_cast<std::size_t>(a)] * y[i];
      for (int c = 0; c < 3; ++c) A[a][c] += rows[i][static_cast<std::size_t>(a)] * rows[i][static_cast<std::size_t>(c)];
    }
  // Gaussian elimination with partial pivoting on the 3x3 normal equations.
  int piv[3] = {0, 1, 2};
  for (int col = 0; col < 3; ++col) {
    int best = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(A[r][col]) > std::abs(A[best][col])) best = r;
    if (std::abs(A[best][col]) < 1e-300) throw domain_error("log-regressor fit is degenerate");
    std::swap(A[col], A[best]);
    std::swap(b[col], b[best]);
    std::swap(piv[col], piv[best]);
    for (int r = col + 1; r < 3; ++r) {
      double m = A[r][col] / A[col][col];
      for (int c = col; c < 3; ++c) A[r][c] -= m * A[col][c];
      b[r] -= m * b[col];
    }
  }
  double coef[3];
  for (int r = 2; r >= 0; --r) {
    double v = b[r];
    for (int c = r + 1; c < 3; ++c) v -= A[r][c] * coef[c];
    coef[r] = v / A[r][r];
  }
  ExponentFit f;
  f.intercept = coef[0];
  f.slope = coef[1];
  f.log_coefficient = coef[2];
  std::vector<double> fitted;
  for (const auto& r : rows) fitted.push_back(coef[0] + coef[1] * r[1] + coef[2] * r[2]);
  f.r_squared = detail::r_squared(y, fitted);
  f.predicted = predicted;
  f.tolerance = tolerance;
  f.verdict_match = std::abs(f.slope - predicted) <= tolerance && f.r_squared >= 0.99;
  return f;
}

// Ratio series lhs/rhs over common members.
inline Series ratio_series(const Series& lhs, const Series& rhs) {
  if (lhs.size() != rhs.size()) throw domain_error("ratio of series with different lengths");
  Series out;
  for (std::size_t i = 0; i < lhs.size(); ++i) out.push_back({lhs[i].n, lhs[i].value / rhs[i].value});
  return out;
}

// Geometric grid n = 2^{j/2}, j = j0..j1.
inline std::vector<double> geometric_n(int j0 = 4, int j1 = 12) {
  std::vector<double> v;
  for (int j = j0; j <= j1; ++j) v.push_back(std::pow(2.0, 0.5 * j));
  return v;
}

}  // namespace rlab
