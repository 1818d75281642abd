// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "rlab/rational.hpp"
#include "rlab/verdict.hpp"

#include <cmath>
#include <random>
#include <utility>
#include <vector>

namespace rlab {

// c_1..c_m with (-1)^m - cos(2m t) = sum_j c_j (2 cos t)^{2j}.
struct TrigCoefficients {
  int m = 1;
  std::vector<Rational> c;

  // Horner in extended precision: the coefficients grow like 4^m and cancel.
  double residual(double theta) const {
    long double x = 2.0L * std::cos(static_cast<long double>(theta)), x2 = x * x, rhs = 0.0L;
    for (auto it = c.rbegin(); it != c.rend(); ++it)
      rhs = (rhs + static_cast<long double>(it->num()) / static_cast<long double>(it->den())) * x2;
    long double lhs = (m % 2 == 0 ? 1.0L : -1.0L) - std::cos(2.0L * m * static_cast<long double>(theta));
    return static_cast<double>(lhs - rhs);
  }
};

// Expands cos(2m t) = T_m(2x - 1) in powers of x = cos^2 t with the
// Chebyshev recurrence, then rescales by 4^j.
inline TrigCoefficients trig_coefficients(int m) {
  if (m < 1) throw domain_error("m must be positive");
  using Poly = std::vector<Rational>;
  Poly y{Rational(-1), Rational(2)};  // 2x - 1
  auto mul = [](const Poly& a, const Poly& b) {
    Poly r(a.size() + b.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
  };
  auto sub = [](Poly a, const Poly& b) {
    if (a.size() < b.size()) a.resize(b.size(), Rational(0));
    for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
    return a;
  };
  Poly t0{Rational(1)}, t1 = y;
  for (int n = 1; n < m; ++n) {
    Poly two_y_t1 = mul(Poly{Rational(-2), Rational(4)}, t1);
    Poly t2 = sub(two_y_t1, t0);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  TrigCoefficients out;
  out.m = m;
  Rational four_j(1);
  for (int j = 1; j <= m; ++j) {
    four_j *= Rational(4);
    out.c.push_back(-t1[j] / four_j);
  }
  return out;
}

struct LeibnizTerm {
  int left = 0;   // derivative order of the first factor
  int right = 0;  // derivative order of the second factor
  std::int64_t coefficient = 0;
};

// (d/dr)^j <u_r, u_r> = sum_i C(j,i) <u^(base+i), u^(base+j-i)>; terms with a
// factor of order below `vanishing` drop out.
inline std::vector<LeibnizTerm> newton_leibniz_expansion(int base, int j, int vanishing = 0) {
  if (j < 0 || base < 0) throw domain_error("orders must be nonnegative");
  std::vector<LeibnizTerm> out;
  std::int64_t binom = 1;
  for (int i = 0; i <= j; ++i) {
    if (i > 0) binom = binom * (j - i + 1) / i;
    int l = base + i, r = base + j - i;
    if (l < vanishing || r < vanishing) continue;
    out.push_back({l, r, binom});
  }
  return out;
}

// Lemma-style bound for almost convex sequences on {0} and [M..N].
// Given a symmetric table gram(a, b) = Re<u^(a), u^(b)>, returns
// sum_j c_j (d/dr)^{2j} <u_r^(k-j), u_r^(k-j)> at r = 0, with the derivatives
// expanded by the product rule. The trig identity makes this equal to
// (-1)^m gram(k, k) - gram(k - m, k + m).
template <class Gram>
double trig_combination(int k, int m, const Gram& gram) {
  if (m < 1 || k < m) throw domain_error("need 1 <= m <= k");
  TrigCoefficients tc = trig_coefficients(m);
  long double acc = 0.0L;
  for (int j = 1; j <= m; ++j) {
    long double d2j = 0.0L;
    for (const auto& t : newton_leibniz_expansion(k - j, 2 * j))
      d2j += static_cast<long double>(t.coefficient) * gram(t.left, t.right);
    const Rational& c = tc.c[static_cast<std::size_t>(j - 1)];
    acc += static_cast<long double>(c.num()) / static_cast<long double>(c.den()) * d2j;
  }
  return static_cast<double>(acc);
}

struct ConvexSequenceInstance {
  std::vector<double> a;  // indices 0..N; entries 1..M-1 are ignored
  double C = 1.0;
  int M = 1;
  int N = 2;

  std::string violation() const {
    if (M < 1) return "M must be positive";
    if (2 * M > N) return "need 2M <= N";
    if (static_cast<int>(a.size()) != N + 1) return "sequence length must be N+1";
    if (!(C > 0)) return "C must be positive";
    const double eps = 1e-12 * (1.0 + C);
    for (int k = M + 1; k <= N - 1; ++k)
      if (a[k] > C + 0.5 * (a[k + 1] + a[k - 1]) + eps) return "convexity fails at k=" + std::to_string(k);
    if (a[M] > C + 0.5 * (a[0] + a[2 * M]) + eps) return "midpoint relation fails at M";
    if (a[0] > C + eps) return "a_0 > C";
    if (a[N] > C + eps) return "a_N > C";
    return {};
  }
};

struct ConvexSequenceBound {
  double bound = 0;
  double value = 0;  // a_M
  bool satisfied = false;
};

inline ConvexSequenceBound convex_sequence_bound(const ConvexSequenceInstance& inst) {
  if (auto why = inst.violation(); !why.empty()) throw domain_error("rejected instance: " + why);
  double N = inst.N;
  ConvexSequenceBound r;
  r.bound = inst.C * inst.M * (N * N + 1.0) / N;
  r.value = inst.a[inst.M];
  r.satisfied = r.value <= r.bound * (1 + 1e-12);
  return r;
}

// Draws instances close to the extremal case: b_k = a_k + C k^2 convex on
// [M..N], then bounded downward perturbations, accepted only if all
// hypotheses hold.
template <class Rng>
ConvexSequenceInstance random_convex_instance(Rng& rng, int max_n = 40) {
  std::uniform_int_distribution<int> dn(2, max_n);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    ConvexSequenceInstance inst;
    inst.N = dn(rng);
    inst.M = std::uniform_int_distribution<int>(1, inst.N / 2)(rng);
    inst.C = 0.1 + 9.9 * u(rng);
    const int N = inst.N, M = inst.M;
    const double C = inst.C;
    std::vector<double> b(N + 1, 0.0);
    double slope = -C * (2.0 * N) * u(rng);
    b[M] = C * (u(rng) - 0.5) * N;
    for (int k = M + 1; k <= N; ++k) {
      slope += C * 2.0 * u(rng);
      b[k] = b[k - 1] + slope;
    }
    inst.a.assign(N + 1, 0.0);
    for (int k = M; k <= N; ++k) inst.a[k] = b[k] - C * k * k;
    // Shift by a linear function in k so that a_N sits just below C.
    double lift = C - inst.a[N] - C * u(rng);
    for (int k = M; k <= N; ++k) inst.a[k] += lift * (k - M + 1) / (N - M + 1);
    for (int k = M + 1; k < N; ++k)
      if (u(rng) < 0.3) inst.a[k] -= C * u(rng);
    double need = 2.0 * (inst.a[M] - C) - inst.a[2 * M];
    if (need > C) continue;
    inst.a[0] = need + (C - need) * u(rng);
    if (inst.violation().empty()) return inst;
  }
}

}  // namespace rlab
