// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <utility>
#include <vector>

namespace rlab {

// Neumaier compensated sum; deterministic for a fixed input order.
class NeumaierSum {
 public:
  void add(double v) {
    double t = s_ + v;
    if (std::abs(s_) >= std::abs(v))
      c_ += (s_ - t) + v;
    else
      c_ += (v - t) + s_;
    s_ = t;
  }
  double value() const { return s_ + c_; }

 private:
  double s_ = 0.0, c_ = 0.0;
};

class ComplexNeumaierSum {
 public:
  void add(std::complex<double> v) {
    re_.add(v.real());
    im_.add(v.imag());
  }
  std::complex<double> value() const { return {re_.value(), im_.value()}; }

 private:
  NeumaierSum re_, im_;
};

// Gauss-Legendre nodes and weights on [-1, 1].
inline std::vector<std::pair<double, double>> gauss_legendre(int n) {
  std::vector<std::pair<double, double>> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double pn = n == 1 ? x : p1;
      double pm = n == 1 ? 1.0 : p0;
      dp = n * (x * pn - pm) / (x * x - 1.0);
      double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    out[static_cast<std::size_t>(i)] = {x, 2.0 / ((1.0 - x * x) * dp * dp)};
  }
  return out;
}

// Integral of f over [a, b] with an n-point Gauss-Legendre rule.
template <class F>
double gauss_integrate(F&& f, double a, double b, int n = 48) {
  static thread_local std::vector<std::pair<double, double>> rule;
  if (static_cast<int>(rule.size()) != n) rule = gauss_legendre(n);
  double mid = 0.5 * (a + b), half = 0.5 * (b - a), s = 0.0;
  for (auto [x, w] : rule) s += w * f(mid + half * x);
  return s * half;
}

}  // namespace rlab
