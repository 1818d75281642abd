// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "rlab/rational.hpp"
#include "rlab/verdict.hpp"

#include <string>

namespace rlab {

// Dimension d of the ambient space and the Lebesgue exponent p of the data.
struct ParamTuple {
  int d = 3;
  Rational p{1};

  void validate() const {
    if (d < 2) throw domain_error("dimension must be at least 2");
    if (p < Rational(1)) throw domain_error("p must be at least 1");
  }
  // Upper end 2(d+1)/(d+3) of the Stein-Tomas range (kappa_p = 0 there).
  Rational stein_tomas_endpoint() const { return Rational(2 * (d + 1), d + 3); }
};

struct ExponentPair {
  Rational sigma;  // surface-measure exponent d/p - (d+1)/2
  Rational kappa;  // Knapp exponent (d+1)/p - (d+3)/2
};

inline ExponentPair exponents(const ParamTuple& pt) {
  pt.validate();
  Rational inv = Rational(1) / pt.p;
  return {Rational(pt.d) * inv - Rational(pt.d + 1, 2), Rational(pt.d + 1) * inv - Rational(pt.d + 3, 2)};
}

struct SIQuery {
  int alpha = 0;
  int beta = 0;
  Rational gamma{0};
  Rational p{1};
};

struct HDRQuery {
  int k = 1;
  Rational s{0};
  Rational ell{0};
  Rational p{1};

  void validate() const {
    if (k < 1) throw domain_error("k must be a positive integer");
    if (s < Rational(0)) throw domain_error("s must be nonnegative");
    if (ell < Rational(0)) throw domain_error("ell must be nonnegative");
  }
};

namespace detail {
inline void put(Verdict& v, const std::string& key, const std::string& value) { v.params.emplace_back(key, value); }
inline bool finish(Verdict& v) {
  v.status = v.all_satisfied() ? Status::Holds : Status::Fails;
  return v.status == Status::Holds;
}
}  // namespace detail

// Surface inequality: iff statement in alpha, beta, gamma, p.
inline Verdict si_verdict(const SIQuery& q, int d) {
  ParamTuple pt{d, q.p};
  auto [sigma, kappa] = exponents(pt);
  if (q.gamma < Rational(0) || !(q.gamma < Rational(d - 1, 2)))
    throw domain_error("gamma must lie in [0, (d-1)/2)");
  if (q.alpha < 0 || q.beta < 0) throw domain_error("alpha and beta must be nonnegative");
  Verdict v;
  v.theorem = "surface-inequality";
  detail::put(v, "d", std::to_string(d));
  detail::put(v, "p", q.p.str());
  detail::put(v, "alpha", std::to_string(q.alpha));
  detail::put(v, "beta", std::to_string(q.beta));
  detail::put(v, "gamma", q.gamma.str());
  Rational a(q.alpha), ab(q.alpha + q.beta);
  v.add("alpha <= gamma", a <= q.gamma, a == q.gamma);
  bool p1 = q.p == Rational(1);
  v.add(p1 ? "alpha + beta <= sigma_p" : "alpha + beta < sigma_p", p1 ? ab <= sigma : ab < sigma, ab == sigma);
  Rational knapp = Rational(2 * q.alpha + q.beta) - q.gamma;
  v.add("2 alpha - gamma + beta <= kappa_p", knapp <= kappa, knapp == kappa);
  detail::finish(v);
  return v;
}

// Sobolev-scale restriction of k normal derivatives for general L_p data.
inline Verdict restriction_sobolev_verdict(int k, const Rational& s, const ParamTuple& pt) {
  if (k < 0) throw domain_error("k must be nonnegative");
  if (s < Rational(0)) throw domain_error("s must be nonnegative");
  auto [sigma, kappa] = exponents(pt);
  Verdict v;
  v.theorem = "restriction-sobolev";
  detail::put(v, "d", std::to_string(pt.d));
  detail::put(v, "p", pt.p.str());
  detail::put(v, "k", std::to_string(k));
  detail::put(v, "s", s.str());
  Rational K(k);
  v.add("k <= s", K <= s, K == s);
  bool endpoint = pt.p == Rational(1) && K == sigma && s > K;
  if (endpoint) {
    v.add("k = sigma_1 and s > k", true, true);
  } else {
    v.add("k < sigma_p", K < sigma);
  }
  Rational knapp = Rational(2 * k) - s;
  v.add("2k - s <= kappa_p", knapp <= kappa, knapp == kappa);
  detail::finish(v);
  return v;
}

// Restriction of the k-th derivative for data whose transform vanishes on
// the surface to order k-1.
inline Verdict vanishing_restriction_verdict(int k, const Rational& s, const ParamTuple& pt) {
  if (k < 1) throw domain_error("k must be a positive integer");
  if (s < Rational(0)) throw domain_error("s must be nonnegative");
  auto [sigma, kappa] = exponents(pt);
  Verdict v;
  v.theorem = "vanishing-restriction";
  detail::put(v, "d", std::to_string(pt.d));
  detail::put(v, "p", pt.p.str());
  detail::put(v, "k", std::to_string(k));
  detail::put(v, "s", s.str());
  Rational K(k), zero(0);
  bool p1 = pt.p == Rational(1);
  Rational knapp = Rational(2 * k) - s;
  if (s == zero) {
    v.add("2k <= kappa_p", Rational(2 * k) <= kappa, Rational(2 * k) == kappa);
    detail::finish(v);
    return v;
  }
  v.add("2k - s <= kappa_p", knapp <= kappa, knapp == kappa);
  bool endpoint = p1 && K == sigma;
  if (endpoint)
    v.add("k <= sigma_1", true, true);
  else
    v.add("k < sigma_p", K < sigma);
  if (!v.all_satisfied()) {
    v.status = Status::Fails;
    return v;
  }
  if (Rational(2 * k) <= kappa) {
    v.add("2k <= kappa_p", true, Rational(2 * k) == kappa);
    v.status = Status::Holds;
    return v;
  }
  if (endpoint) {
    bool ok = s > K;
    v.add("s > k at the endpoint k = sigma_1", ok);
    v.status = ok ? Status::Holds : Status::NotCovered;
    if (!ok) v.note = "endpoint s = k is not decided";
    return v;
  }
  Rational threshold = max(zero, max(K + Rational(1) - Rational((sigma - K).ceil()), knapp + s - kappa));
  if (p1 && sigma.is_integer()) threshold = min(threshold, max(zero, Rational(2 * k) - kappa));
  bool ok = s >= threshold;
  v.add("s >= proven threshold " + threshold.str(), ok, s == threshold);
  v.status = ok ? Status::Holds : Status::NotCovered;
  if (!ok) v.note = "s lies between the necessary bound and the proven threshold";
  return v;
}

// The spaces of data vanishing to order k-1 and to order k coincide.
inline Verdict stability_verdict(int k, const ParamTuple& pt) {
  if (k < 1) throw domain_error("k must be a positive integer");
  auto [sigma, kappa] = exponents(pt);
  (void)kappa;
  Verdict v;
  v.theorem = "stability";
  detail::put(v, "d", std::to_string(pt.d));
  detail::put(v, "p", pt.p.str());
  detail::put(v, "k", std::to_string(k));
  Rational K(k);
  if (pt.p == Rational(1))
    v.add("k > sigma_1", K > sigma);
  else
    v.add("k >= sigma_p", K >= sigma, K == sigma);
  detail::finish(v);
  return v;
}

// Necessary conditions for the higher-derivative restriction statement.
inline Verdict hdr_necessary(const HDRQuery& q, int d) {
  q.validate();
  ParamTuple pt{d, q.p};
  auto [sigma, kappa] = exponents(pt);
  Verdict v;
  v.theorem = "hdr-necessary";
  detail::put(v, "d", std::to_string(d));
  detail::put(v, "p", q.p.str());
  detail::put(v, "k", std::to_string(q.k));
  detail::put(v, "s", q.s.str());
  detail::put(v, "ell", q.ell.str());
  Rational K(q.k);
  v.add("k <= s + ell", K <= q.s + q.ell, K == q.s + q.ell);
  v.add("k <= s + 1", K <= q.s + Rational(1), K == q.s + Rational(1));
  if (q.p == Rational(1))
    v.add("k <= sigma_1", K <= sigma, K == sigma);
  else
    v.add("k < sigma_p", K < sigma);
  if (K > q.s) {
    Rational den = q.s + q.ell - K;
    if (den <= Rational(0)) {
      v.add("k ell / (s + ell - k) <= kappa_p", false);
    } else {
      Rational frac = K * q.ell / den;
      v.add("k ell / (s + ell - k) <= kappa_p", frac <= kappa, frac == kappa);
    }
  }
  Rational knapp = Rational(2 * q.k) - q.s;
  v.add("2k - s <= kappa_p", knapp <= kappa, knapp == kappa);
  v.status = v.all_satisfied() ? Status::NotCovered : Status::Fails;
  return v;
}

// Closed-form sufficient test valid for integer kappa_p and p > 1.
inline Verdict hdr_closed_form(const HDRQuery& q, int d) {
  q.validate();
  ParamTuple pt{d, q.p};
  auto [sigma, kappa] = exponents(pt);
  if (!kappa.is_integer() || !(q.p > Rational(1)) || kappa < Rational(1))
    throw domain_error("closed form needs p > 1 and a positive integer kappa_p");
  Verdict v = hdr_necessary(q, d);
  v.theorem = "hdr-closed-form";
  Rational one(1), K(q.k);
  bool split = q.ell == Rational(0);
  Rational lhs(0);
  if (!split) {
    lhs = Rational(2 * ((q.ell - one) / q.ell * kappa).ceil());
    split = lhs <= kappa;
  }
  if (split) {
    v.add("2 ceil((ell - 1) kappa_p / ell) <= kappa_p", true, lhs == kappa);
  } else {
    Rational half(kappa.num() / 2);
    Rational bound = K - (kappa - K) / (kappa - half);
    v.add("s >= k - (kappa_p - k) / (kappa_p - [kappa_p/2])", q.s >= bound, q.s == bound);
  }
  v.status = v.all_satisfied() ? Status::Holds : Status::NotCovered;
  if (hdr_necessary(q, d).status == Status::Fails) v.status = Status::Fails;
  return v;
}

// Mixed-norm bilinear estimate; p_inner may be infinite in r only.
inline Verdict strichartz_verdict(const SIQuery& q, const Exponent& r, const Rational& p_inner, int d) {
  if (q.gamma < Rational(0) || !(q.gamma < Rational(d - 1, 2)))
    throw domain_error("gamma must lie in [0, (d-1)/2)");
  if (r.reciprocal() > Rational(1)) throw domain_error("r must be at least 1");
  if (p_inner < Rational(1)) throw domain_error("p must be at least 1");
  Verdict v;
  v.theorem = "strichartz";
  detail::put(v, "d", std::to_string(d));
  detail::put(v, "p", p_inner.str());
  detail::put(v, "r", r.str());
  detail::put(v, "alpha", std::to_string(q.alpha));
  detail::put(v, "beta", std::to_string(q.beta));
  detail::put(v, "gamma", q.gamma.str());
  Rational ir = r.reciprocal(), ip = Rational(1) / p_inner;
  Rational a(q.alpha), g = q.gamma;
  Rational lhs1 = Rational(q.alpha + q.beta), lhs2 = Rational(2 * q.alpha + q.beta) - g;
  Rational rhs1 = Rational(d - 1) * ip + ir - Rational(d + 1, 2);
  Rational rhs2 = Rational(d - 1) * ip + Rational(2) * ir - Rational(d + 3, 2);
  bool small_r = ir >= Rational(1, 2);
  bool nec_ok = true;

  v.add("p <= 2", p_inner <= Rational(2), p_inner == Rational(2));
  nec_ok &= p_inner <= Rational(2);
  std::string n1 = "alpha + beta < (d-1)/p + 1/r - (d+1)/2";
  std::string n2 = "2 alpha + beta - gamma < (d-1)/p + 2/r - (d+3)/2";
  if (small_r) {
    v.add("gamma >= alpha", g >= a, g == a);
    nec_ok &= g >= a;
    bool eq1 = r == Exponent::finite(Rational(1));
    v.add(n1, lhs1 < rhs1 || (eq1 && lhs1 == rhs1), lhs1 == rhs1);
    bool eq2 = ir > Rational(1, 2) || g > a;
    v.add(n2, lhs2 < rhs2 || (eq2 && lhs2 == rhs2), lhs2 == rhs2);
  } else {
    Rational gap = Rational(1, 2) - ir;
    v.add("gamma - alpha > 1/2 - 1/r", g - a > gap);
    nec_ok &= g - a >= gap;
    v.add(n1, lhs1 < rhs1);
    v.add(n2, lhs2 < rhs2);
  }
  nec_ok &= lhs1 <= rhs1 && lhs2 <= rhs2;
  if (v.all_satisfied())
    v.status = Status::Holds;
  else if (!nec_ok)
    v.status = Status::Fails;
  else {
    v.status = Status::NotCovered;
    v.note = "endpoint case not decided";
  }
  return v;
}

// Weighted convolution operator C_b between power-weighted spaces.
inline Verdict steinweiss_verdict(const Rational& a, const Rational& b, const Exponent& p) {
  if (p.reciprocal() > Rational(1)) throw domain_error("p must be at least 1");
  Verdict v;
  v.theorem = "stein-weiss";
  detail::put(v, "a", a.str());
  detail::put(v, "b", b.str());
  detail::put(v, "p", p.str());
  Rational ip = p.reciprocal(), one(1), zero(0);
  if (ip >= Rational(1, 2)) {
    bool p1 = ip == one;
    v.add("a >= 0", a >= zero, a == zero);
    if (b <= zero) {
      if (p1)
        v.add("a + b >= 0", a + b >= zero, a + b == zero);
      else
        v.add("a + b > 1 - 1/p", a + b > one - ip);
    } else if (b < one) {
      Rational l = Rational(2) * a + b, r = Rational(2) - Rational(2) * ip;
      v.add("2a + b >= 2 - 2/p", l >= r, l == r);
    } else if (b == one) {
      bool p2 = ip == Rational(1, 2);
      if (p2)
        v.add("a > 0 when p = 2", a > zero);
      else
        v.add("p < 2", true);
    } else {
      v.add("b > 1", true);
    }
    if (a < zero) {
      v.status = Status::NotCovered;
      v.note = "a < 0 lies outside the stated range";
    } else {
      detail::finish(v);
    }
    return v;
  }
  Rational l1 = a + b, r1 = one - ip;
  Rational l2 = Rational(2) * a + b, r2 = Rational(2) - Rational(2) * ip;
  Rational r3 = Rational(1, 2) - ip;
  v.add("a + b > 1 - 1/p", l1 > r1);
  v.add("2a + b > 2 - 2/p", l2 > r2);
  v.add("a > 1/2 - 1/p", a > r3);
  if (v.all_satisfied()) {
    v.status = Status::Holds;
  } else {
    v.status = Status::NotCovered;
    v.note = "only sufficient conditions are known for p > 2";
  }
  return v;
}

}  // namespace rlab
