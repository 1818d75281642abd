// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "rlab/region.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace rlab {

struct PlanarPoint {
  Rational k{0};
  Rational s{0};
  friend bool operator==(const PlanarPoint&, const PlanarPoint&) = default;
  std::string str() const { return "(" + k.str() + ", " + s.str() + ")"; }
};

inline Rational floor_r(const Rational& x) { return Rational(x.floor()); }
inline Rational ceil_r(const Rational& x) { return Rational(x.ceil()); }

// Exponents and shift parameter that fix the (k, s) picture.
struct PlaneGeometry {
  Rational sigma{0};
  Rational kappa{0};
  Rational ell{0};
  bool p_is_one = false;

  static PlaneGeometry from(int d, const Rational& p, const Rational& ell) {
    auto e = exponents(ParamTuple{d, p});
    if (ell < Rational(0)) throw domain_error("ell must be nonnegative");
    return {e.sigma, e.kappa, ell, p == Rational(1)};
  }

  PlanarPoint K() const { return {kappa, kappa}; }
  PlanarPoint L() const { return {Rational(0), -ell}; }
  PlanarPoint P() const {
    Rational c = ceil_r(kappa);
    return {c, Rational(2) * c - kappa};
  }
  PlanarPoint Q() const {
    Rational f = floor_r(kappa);
    return {f, f};
  }
  // (ell - 1) kappa / ell, the pivot index of the point sequences.
  Rational pivot() const { return ell == Rational(0) ? Rational(0) : (ell - Rational(1)) / ell * kappa; }

  // Lines through L and the anchors, evaluated at abscissa k.
  Rational line_kl(const Rational& k) const { return (Rational(1) + ell / kappa) * k - ell; }
  Rational line_lq(const Rational& k) const {
    Rational f = floor_r(kappa);
    return -ell * (f - k) / f + k;
  }
  Rational line_lp(const Rational& k) const {
    Rational c = ceil_r(kappa);
    return -ell * (c - k) / c + k * (Rational(2) * c - kappa) / c;
  }

  bool friendly(const PlanarPoint& q) const {
    return q.k > Rational(0) && q.k < sigma && q.s >= Rational(0) && q.s >= q.k - Rational(1) &&
           Rational(2) * q.k - q.s <= kappa;
  }
  bool subcritical(const PlanarPoint& q) const { return q.k <= q.s; }
};

struct Anchors {
  PlanarPoint K, L, P, Q;
};

inline Anchors anchor_points(const PlaneGeometry& g) {
  if (g.kappa <= Rational(0)) throw domain_error("kappa_p <= 0: the region is empty");
  return {g.K(), g.L(), g.P(), g.Q()};
}
inline Anchors anchor_points(int d, const Rational& p, const Rational& ell) {
  return anchor_points(PlaneGeometry::from(d, p, ell));
}

// Q_j, j = 1..[kappa]: lowest friendly point on the vertical through j above LQ.
inline std::vector<PlanarPoint> q_points(const PlaneGeometry& g) {
  if (g.kappa < Rational(1)) throw domain_error("point sequences need kappa_p >= 1");
  std::vector<PlanarPoint> out;
  std::int64_t f = g.kappa.floor();
  for (std::int64_t j = 1; j <= f; ++j) {
    Rational J(j);
    out.push_back({J, max(g.line_lq(J), J - Rational(1))});
  }
  return out;
}

// P_j, j = 1..[kappa]; the last index is cut by s = 2k - kappa instead of s = k - 1.
inline std::vector<PlanarPoint> p_points(const PlaneGeometry& g) {
  if (g.kappa < Rational(1)) throw domain_error("point sequences need kappa_p >= 1");
  std::vector<PlanarPoint> out;
  std::int64_t f = g.kappa.floor();
  for (std::int64_t j = 1; j <= f; ++j) {
    Rational J(j);
    Rational floor_line = j < f ? J - Rational(1) : Rational(2) * J - g.kappa;
    out.push_back({J, max(g.line_lp(J), floor_line)});
  }
  return out;
}

struct LabeledPoint {
  PlanarPoint pt;
  std::string label;
};

// Upward-closed convex hull of a finite generating set.
class HullRegion {
 public:
  HullRegion() = default;
  explicit HullRegion(std::vector<LabeledPoint> gens, std::string diagnostic = {})
      : generators_(std::move(gens)), diagnostic_(std::move(diagnostic)) {
    dedup();
    build();
  }

  bool empty() const { return generators_.empty(); }
  const std::string& diagnostic() const { return diagnostic_; }
  const std::vector<LabeledPoint>& generators() const { return generators_; }
  // Vertices of the lower boundary, increasing in k.
  const std::vector<PlanarPoint>& lower_chain() const { return chain_; }

  // Smallest s with (k, s) in the hull, if k is inside the k-range.
  std::optional<Rational> lower_boundary(const Rational& k) const {
    if (chain_.empty() || k < chain_.front().k || k > chain_.back().k) return std::nullopt;
    if (chain_.size() == 1) return chain_.front().s;
    for (std::size_t i = 0; i + 1 < chain_.size(); ++i) {
      const auto& a = chain_[i];
      const auto& b = chain_[i + 1];
      if (k >= a.k && k <= b.k) return a.s + (b.s - a.s) * (k - a.k) / (b.k - a.k);
    }
    return chain_.back().s;
  }

  bool contains(const Rational& k, const Rational& s) const {
    auto lb = lower_boundary(k);
    return lb.has_value() && s >= *lb;
  }

 private:
  std::vector<LabeledPoint> generators_;
  std::vector<PlanarPoint> chain_;
  std::string diagnostic_;

  void dedup() {
    std::vector<LabeledPoint> out;
    for (auto& g : generators_) {
      auto it = std::find_if(out.begin(), out.end(), [&](const LabeledPoint& o) { return o.pt == g.pt; });
      if (it == out.end())
        out.push_back(g);
      else if (it->label.find(g.label) == std::string::npos)
        it->label += "=" + g.label;
    }
    generators_ = std::move(out);
  }

  // Lower convex chain by the monotone-chain method; each vertical keeps its lowest point.
  void build() {
    std::vector<PlanarPoint> pts;
    for (const auto& g : generators_) pts.push_back(g.pt);
    std::sort(pts.begin(), pts.end(), [](const PlanarPoint& a, const PlanarPoint& b) {
      return a.k < b.k || (a.k == b.k && a.s < b.s);
    });
    std::vector<PlanarPoint> uniq;
    for (const auto& p : pts)
      if (uniq.empty() || uniq.back().k != p.k) uniq.push_back(p);
    auto cross = [](const PlanarPoint& o, const PlanarPoint& a, const PlanarPoint& b) {
      return (a.k - o.k) * (b.s - o.s) - (a.s - o.s) * (b.k - o.k);
    };
    for (const auto& p : uniq) {
      while (chain_.size() >= 2 && cross(chain_[chain_.size() - 2], chain_.back(), p) <= Rational(0))
        chain_.pop_back();
      chain_.push_back(p);
    }
  }
};

inline bool hull_contains(const HullRegion& region, const Rational& k, const Rational& s) {
  return region.contains(k, s);
}

// Row and column of the case table for kappa >= 2 and ell >= kappa/(kappa-1).
struct TableCase {
  bool applicable = false;
  std::string reason;
  int row = 0;         // 1..5
  bool gap = false;    // no row matched; the last row is used
  int column = 0;      // 1: ceil(kappa) < sigma, 2: otherwise
  std::vector<LabeledPoint> points;
};

inline TableCase table_case(const PlaneGeometry& g) {
  TableCase tc;
  Rational one(1), two(2);
  if (g.kappa < two) {
    tc.reason = "kappa_p < 2";
    return tc;
  }
  if (g.ell < g.kappa / (g.kappa - one)) {
    tc.reason = "ell < kappa_p/(kappa_p - 1)";
    return tc;
  }
  Rational F = floor_r(g.kappa), C = ceil_r(g.kappa);
  if (!(F < g.sigma)) {
    tc.reason = "Q = ([kappa_p],[kappa_p]) is not in the friendly region";
    return tc;
  }
  tc.applicable = true;
  Rational a = g.pivot();
  std::int64_t A = a.ceil(), B = a.floor();
  Rational A2(2 * A), B2(2 * B);
  if (A2 <= F)
    tc.row = 1;
  else if (B2 <= F && F < A2 && A2 <= C)
    tc.row = 2;
  else if (B2 <= F && F < C && C < A2)
    tc.row = 3;
  else if (F < B2 && B2 <= C && C < A2)
    tc.row = 4;
  else if (C < B2)
    tc.row = 5;
  else {
    tc.row = 5;
    tc.gap = true;
  }
  tc.column = C < g.sigma ? 1 : 2;

  auto qs = q_points(g);
  auto ps = p_points(g);
  std::int64_t fl = F.num();
  auto addQ = [&](std::int64_t j) {
    if (j >= 1 && j <= fl) tc.points.push_back({qs[j - 1], "Q" + std::to_string(j)});
  };
  auto addP = [&](std::int64_t j) {
    if (tc.column == 1 && j >= 1 && j <= fl) tc.points.push_back({ps[j - 1], "P" + std::to_string(j)});
  };
  switch (tc.row) {
    case 1: addQ(A); addQ(B); addQ(B - 1); addP(A); addP(B); break;
    case 2: addQ(B); addQ(B - 1); addP(A); addP(B); break;
    case 3: addQ(B); addQ(B - 1); addP(B); break;
    case 4: addQ(B - 1); addP(B); break;
    default: addQ(fl / 2); addP(C.num() / 2); break;
  }
  return tc;
}

// Points certified by connecting L with friendly subcritical points X at
// integer abscissa m: every integer point of LX from the leftmost friendly
// one, M, up to X is reachable when 2M <= m.
inline std::vector<LabeledPoint> certified_points(const PlaneGeometry& g) {
  std::vector<LabeledPoint> out;
  Rational one(1), two(2), zero(0);
  for (std::int64_t m = 1; Rational(m) < g.sigma; ++m) {
    Rational M(m);
    PlanarPoint X{M, max(M, two * M - g.kappa)};
    if (!g.friendly(X)) continue;
    out.push_back({X, "X" + std::to_string(m)});
    std::vector<Rational> heights{X.s};
    // Raised lines through L and the lowest friendly point at each j <= m/2.
    for (std::int64_t j = 1; 2 * j <= m; ++j) {
      Rational J(j);
      Rational base = max(zero, max(J - one, two * J - g.kappa));
      Rational at_m = -g.ell + (base + g.ell) * M / J;
      if (at_m > X.s) heights.push_back(at_m);
    }
    for (const Rational& top : heights) {
      PlanarPoint Xt{M, top};
      if (!g.friendly(Xt) || !g.subcritical(Xt)) continue;
      auto on_line = [&](std::int64_t j) {
        Rational J(j);
        return PlanarPoint{J, -g.ell + (top + g.ell) * J / M};
      };
      std::int64_t lead = 0;
      for (std::int64_t j = 1; j <= m; ++j)
        if (g.friendly(on_line(j))) {
          lead = j;
          break;
        }
      if (lead == 0 || 2 * lead > m) continue;
      for (std::int64_t j = lead; j <= m; ++j) {
        PlanarPoint y = on_line(j);
        if (g.friendly(y)) out.push_back({y, "Y" + std::to_string(j) + "@X" + std::to_string(m)});
      }
    }
  }
  return out;
}

// Hull of all points reached by the connection and convexity arguments.
inline HullRegion reachable_hull(const PlaneGeometry& g) {
  if (g.kappa <= Rational(0)) return HullRegion({}, "kappa_p <= 0: the region is empty");
  Rational one(1), two(2);
  std::vector<LabeledPoint> gens{{{Rational(0), Rational(0)}, "O"}};
  for (auto& c : certified_points(g)) gens.push_back(c);
  if (g.kappa >= two) {
    TableCase tc = table_case(g);
    if (tc.applicable) {
      gens.push_back({{one, Rational(0)}, "(1,0)"});
      gens.push_back({g.Q(), "Q"});
      for (auto& t : tc.points) gens.push_back(t);
    } else if (g.ell <= g.kappa / (g.kappa - one) && floor_r(g.kappa) < g.sigma) {
      for (const auto& q : q_points(g))
        if (g.friendly({q.k, g.line_lq(q.k)})) gens.push_back({{q.k, g.line_lq(q.k)}, "LQ" + q.k.str()});
      if (ceil_r(g.kappa) < g.sigma)
        for (const auto& q : q_points(g))
          if (g.friendly({q.k, g.line_lp(q.k)})) gens.push_back({{q.k, g.line_lp(q.k)}, "LP" + q.k.str()});
    }
  } else if (two < g.sigma) {
    Rational s = g.ell <= g.kappa ? two - (g.kappa + g.ell) / two : two - g.kappa;
    PlanarPoint y{one, s};
    if (g.friendly(y)) gens.push_back({y, "small-kappa"});
  }
  return HullRegion(std::move(gens));
}

inline HullRegion reachable_hull(int d, const Rational& p, const Rational& ell) {
  return reachable_hull(PlaneGeometry::from(d, p, ell));
}

}  // namespace rlab
