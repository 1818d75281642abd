// SPDX-License-Identifier: Apache-2.0
#include "rlab/diagram.hpp"
#include "rlab/geometry.hpp"
#include "rlab/hdr.hpp"

#include <catch_amalgamated.hpp>

#include <random>
#include <set>

using namespace rlab;

namespace {
// Geometry with prescribed exponents; sigma is placed above every anchor.
PlaneGeometry geo(Rational kappa, Rational ell, Rational sigma = Rational(100)) { return {sigma, kappa, ell, false}; }

// Independent membership oracle: the lowest point above k over all pairs of
// generators whose k-range straddles k.
bool pair_oracle(const std::vector<PlanarPoint>& v, const Rational& k, const Rational& s) {
  for (const auto& a : v)
    for (const auto& b : v) {
      if (a.k == b.k) {
        if (a.k == k && s >= min(a.s, b.s)) return true;
        continue;
      }
      if (k < min(a.k, b.k) || k > max(a.k, b.k)) continue;
      Rational t = (k - a.k) / (b.k - a.k);
      if (s >= a.s + t * (b.s - a.s)) return true;
    }
  return false;
}

HullRegion hull_of(const std::vector<PlanarPoint>& v) {
  std::vector<LabeledPoint> gens;
  for (std::size_t i = 0; i < v.size(); ++i) gens.push_back({v[i], "v" + std::to_string(i)});
  return HullRegion(gens);
}
}  // namespace

TEST_CASE("anchors at integer kappa collapse") {
  auto a = anchor_points(geo(Rational(3), Rational(2)));
  CHECK(a.K == PlanarPoint{Rational(3), Rational(3)});
  CHECK(a.L == PlanarPoint{Rational(0), Rational(-2)});
  CHECK(a.P == a.K);
  CHECK(a.Q == a.K);
}

TEST_CASE("anchors at half integer kappa") {
  auto a = anchor_points(geo(Rational(5, 2), Rational(1)));
  CHECK(a.P == PlanarPoint{Rational(3), Rational(7, 2)});
  CHECK(a.Q == PlanarPoint{Rational(2), Rational(2)});
  auto b = anchor_points(geo(Rational(2), Rational(3)));
  CHECK(b.L == PlanarPoint{Rational(0), Rational(-3)});
  CHECK(b.K == PlanarPoint{Rational(2), Rational(2)});
}

TEST_CASE("anchors from dimension and exponent") {
  auto a = anchor_points(9, Rational(1), Rational(3, 2));
  CHECK(a.K == PlanarPoint{Rational(4), Rational(4)});
  CHECK_THROWS_AS(anchor_points(3, Rational(2), Rational(1)), domain_error);
  CHECK_THROWS_AS(q_points(geo(Rational(1, 2), Rational(1))), domain_error);
  CHECK_THROWS_AS(p_points(geo(Rational(1, 2), Rational(1))), domain_error);
}

TEST_CASE("q points") {
  auto q = q_points(geo(Rational(3), Rational(2)));
  REQUIRE(q.size() == 3);
  CHECK(q[0] == PlanarPoint{Rational(1), Rational(0)});
  CHECK(q[1] == PlanarPoint{Rational(2), Rational(4, 3)});
  q = q_points(geo(Rational(4), Rational(4)));
  CHECK(q[0] == PlanarPoint{Rational(1), Rational(0)});
  CHECK(q[2] == PlanarPoint{Rational(3), Rational(2)});
  q = q_points(geo(Rational(9, 2), Rational(100000)));
  for (std::size_t j = 1; j < 4; ++j) CHECK(q[j - 1] == PlanarPoint{Rational(j), Rational(j - 1)});
}

TEST_CASE("p points") {
  auto g = geo(Rational(3), Rational(2));
  CHECK(p_points(g) == q_points(g));
  auto g2 = geo(Rational(5, 2), Rational(1));
  auto p = p_points(g2);
  CHECK(p[1].s == g2.line_lp(Rational(2)));
  auto p3 = p_points(geo(Rational(5, 2), Rational(3)));
  CHECK(p3[1] == PlanarPoint{Rational(2), Rational(3, 2)});
}

TEST_CASE("L and K lie on the line KL") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> num(1, 60), den(1, 12);
  for (int i = 0; i < 300; ++i) {
    auto g = geo(Rational(num(rng), den(rng)), Rational(num(rng), den(rng)));
    CHECK(g.line_kl(Rational(0)) == g.L().s);
    CHECK(g.line_kl(g.kappa) == g.K().s);
  }
}

TEST_CASE("q points follow the pivot rule exactly") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> dd(4, 30), den(1, 9), num(1, 40);
  int pairs = 0;
  while (pairs < 500) {
    int d = dd(rng);
    Rational p(2 * (d + 1) * 7, 7 * (d + 3) + num(rng));  // p inside the Stein-Tomas range
    if (!(p >= Rational(1))) continue;
    Rational ell(num(rng), den(rng));
    auto g = PlaneGeometry::from(d, p, ell);
    if (g.kappa < Rational(1)) continue;
    ++pairs;
    auto q = q_points(g);
    Rational a = g.pivot();
    for (std::int64_t j = 1; j <= static_cast<std::int64_t>(q.size()); ++j) {
      const auto& pt = q[static_cast<std::size_t>(j - 1)];
      if (j < a.floor()) CHECK(pt == PlanarPoint{Rational(j), Rational(j - 1)});
      if (j >= a.ceil()) CHECK(pt.s == g.line_lq(Rational(j)));
    }
  }
}

TEST_CASE("hull membership examples") {
  auto h = hull_of({{Rational(0), Rational(0)}, {Rational(2), Rational(2)}});
  CHECK(hull_contains(h, Rational(1), Rational(1)));
  CHECK_FALSE(hull_contains(h, Rational(1), Rational(1, 2)));
  CHECK(hull_contains(h, Rational(1), Rational(7)));
  CHECK_FALSE(hull_contains(h, Rational(3), Rational(7)));
  auto h2 = hull_of({{Rational(0), Rational(0)}, {Rational(1), Rational(0)}, {Rational(3), Rational(3)}});
  CHECK(hull_contains(h2, Rational(2), Rational(3, 2)));
  CHECK_FALSE(hull_contains(h2, Rational(2), Rational(1)));
  CHECK(h2.lower_boundary(Rational(2)) == Rational(3, 2));
}

TEST_CASE("hull membership agrees with the pair oracle") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> coord(-12, 12), count(1, 6), den(1, 4);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<PlanarPoint> v;
    int n = count(rng);
    for (int i = 0; i < n; ++i) v.push_back({Rational(coord(rng), den(rng)), Rational(coord(rng), den(rng))});
    auto h = hull_of(v);
    for (int k8 = -30; k8 <= 30; k8 += 3)
      for (int s8 = -30; s8 <= 30; s8 += 2) {
        Rational k(k8, 8), s(s8, 8);
        CHECK(hull_contains(h, k, s) == pair_oracle(v, k, s));
      }
    for (const auto& p : v) CHECK(hull_contains(h, p.k, p.s));
  }
}

TEST_CASE("reachable hull examples") {
  // integer kappa = 3 with sigma > 3
  auto h = reachable_hull(9, Rational(10, 9), Rational(2));
  CHECK(hull_contains(h, Rational(1), Rational(0)));
  // d = 7 lacks a friendly point at k = 3; the case needs d > 7
  CHECK_FALSE(hull_contains(reachable_hull(7, Rational(1), Rational(3, 2)), Rational(1), Rational(0)));
  CHECK(hull_contains(reachable_hull(9, Rational(1), Rational(3, 2)), Rational(1), Rational(0)));
  for (int d = 3; d <= 12; ++d)
    for (const auto& p : {Rational(1), Rational(9, 8), Rational(6, 5)}) {
      auto g = PlaneGeometry::from(d, p, Rational(1));
      if (g.kappa <= Rational(0)) continue;
      CHECK(hull_contains(reachable_hull(g), Rational(0), Rational(0)));
    }
  auto e = reachable_hull(3, Rational(2), Rational(1));
  CHECK(e.empty());
  CHECK_FALSE(e.diagnostic().empty());
}

TEST_CASE("hull generators are friendly or the base points") {
  for (int d = 3; d <= 16; ++d)
    for (const auto& p : {Rational(1), Rational(9, 8), Rational(6, 5), Rational(4, 3), Rational(21, 20)})
      for (int e4 = 0; e4 <= 16; ++e4) {
        auto g = PlaneGeometry::from(d, p, Rational(e4, 4));
        if (g.kappa <= Rational(0)) continue;
        auto h = reachable_hull(g);
        for (const auto& gen : h.generators()) {
          bool base = gen.pt == PlanarPoint{Rational(0), Rational(0)} || gen.pt == PlanarPoint{Rational(1), Rational(0)};
          INFO("d=" << d << " p=" << p << " ell=" << g.ell << " " << gen.label << " " << gen.pt.str());
          CHECK((base || g.friendly(gen.pt)));
        }
      }
}

TEST_CASE("table dispatch needs its preconditions") {
  CHECK_FALSE(table_case(geo(Rational(3, 2), Rational(3))).applicable);
  CHECK_FALSE(table_case(geo(Rational(3), Rational(1))).applicable);
  CHECK_FALSE(table_case(geo(Rational(3), Rational(2), Rational(3))).applicable);
  auto tc = table_case(geo(Rational(3), Rational(2)));
  CHECK(tc.applicable);
  CHECK(tc.row >= 1);
  CHECK(tc.row <= 5);
}

TEST_CASE("diagram shows boundary lines and anchors") {
  auto g = PlaneGeometry::from(9, Rational(1), Rational(3, 2));
  std::string svg = svg::region_diagram(g, reachable_hull(g), PlanarPoint{Rational(1), Rational(0)});
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("s = 2k - 4") != std::string::npos);
  CHECK(svg.find("through (0, -3/2) and (4, 4)") != std::string::npos);
  CHECK(svg.find("k = 4") != std::string::npos);
  CHECK(svg.find(">K</text>") != std::string::npos);
  CHECK(svg.find("query (1, 0)") != std::string::npos);

  auto empty = PlaneGeometry::from(3, Rational(2), Rational(1));
  std::string e = svg::region_diagram(empty, reachable_hull(empty));
  CHECK(e.find("region is empty") != std::string::npos);
  CHECK(e.find(">K</text>") == std::string::npos);
}
