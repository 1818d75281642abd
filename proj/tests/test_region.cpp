// SPDX-License-Identifier: Apache-2.0
#include "rlab/hdr.hpp"
#include "rlab/region.hpp"

#include <catch_amalgamated.hpp>

#include <random>
#include <vector>

using namespace rlab;

namespace {
Exponent fin(Rational r) { return Exponent::finite(r); }
const std::vector<Rational> kSweepP{Rational(1), Rational(9, 8), Rational(6, 5), Rational(4, 3)};
const std::vector<Rational> kSweepEll{Rational(1, 2), Rational(1), Rational(3, 2), Rational(2), Rational(3)};
}  // namespace

TEST_CASE("exponent pair values") {
  auto e = exponents({3, Rational(1)});
  CHECK(e.sigma == Rational(1));
  CHECK(e.kappa == Rational(1));
  e = exponents({2, Rational(2)});
  CHECK(e.sigma == Rational(-1, 2));
  CHECK(e.kappa == Rational(-1));
  CHECK(exponents({5, Rational(12, 12)}).kappa == Rational(2));
  CHECK_THROWS_AS(exponents({1, Rational(1)}), domain_error);
  CHECK_THROWS_AS(exponents({3, Rational(1, 2)}), domain_error);
}

TEST_CASE("kappa never exceeds sigma and meets it only at p = 1") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> den(1, 97), dd(2, 20);
  for (int i = 0; i < 1000; ++i) {
    int q = den(rng);
    int n = std::uniform_int_distribution<int>(q, 4 * q)(rng);
    Rational p(n, q);
    auto e = exponents({dd(rng), p});
    CHECK(e.kappa <= e.sigma);
    CHECK((e.kappa == e.sigma) == (p == Rational(1)));
  }
}

TEST_CASE("surface inequality verdicts") {
  CHECK(si_verdict({0, 0, Rational(0), Rational(4, 3)}, 3).status == Status::Holds);
  auto v = si_verdict({1, 0, Rational(0), Rational(1)}, 3);
  CHECK(v.status == Status::Fails);
  CHECK(v.violated("alpha <= gamma"));
  v = si_verdict({0, 2, Rational(0), Rational(1)}, 7);
  CHECK(v.status == Status::Holds);
  CHECK_FALSE(v.find("alpha + beta <= sigma_p")->boundary);
  v = si_verdict({0, 2, Rational(0), Rational(1)}, 5);
  CHECK(v.status == Status::Holds);
  CHECK(v.find("alpha + beta <= sigma_p")->boundary);
  CHECK(si_verdict({0, 2, Rational(0), Rational(11, 10)}, 5).status == Status::Fails);
  CHECK_THROWS_AS(si_verdict({0, 0, Rational(3, 2), Rational(1)}, 4), domain_error);
  CHECK_THROWS_AS(si_verdict({0, 0, Rational(-1), Rational(1)}, 4), domain_error);
}

TEST_CASE("restriction sobolev verdicts") {
  CHECK(restriction_sobolev_verdict(0, Rational(0), {3, Rational(4, 3)}).status == Status::Holds);
  CHECK(restriction_sobolev_verdict(1, Rational(1), {5, Rational(1)}).status == Status::Holds);
  auto v = restriction_sobolev_verdict(2, Rational(1), {3, Rational(1)});
  CHECK(v.status == Status::Fails);
  CHECK(v.violated("k <= s"));
  // p = 1 endpoint k = sigma_1 needs s > k
  CHECK(restriction_sobolev_verdict(1, Rational(3, 2), {3, Rational(1)}).status == Status::Holds);
  CHECK(restriction_sobolev_verdict(1, Rational(1), {3, Rational(1)}).status == Status::Fails);
}

TEST_CASE("vanishing restriction verdicts") {
  CHECK(vanishing_restriction_verdict(1, Rational(0), {5, Rational(1)}).status == Status::Holds);
  CHECK(vanishing_restriction_verdict(1, Rational(0), {3, Rational(1)}).status == Status::Fails);
  CHECK(vanishing_restriction_verdict(2, Rational(0), {9, Rational(1)}).status == Status::Holds);
  CHECK_THROWS_AS(vanishing_restriction_verdict(0, Rational(0), {5, Rational(1)}), domain_error);
}

TEST_CASE("stability verdicts") {
  CHECK(stability_verdict(3, {3, Rational(1)}).status == Status::Holds);
  CHECK(stability_verdict(1, {5, Rational(1)}).status == Status::Fails);
  CHECK(stability_verdict(2, {4, Rational(2)}).status == Status::Holds);
  // p = 1 needs strict inequality
  CHECK(stability_verdict(1, {3, Rational(1)}).status == Status::Fails);
}

TEST_CASE("necessary conditions for higher derivative restriction") {
  CHECK(hdr_necessary({1, Rational(0), Rational(2), Rational(1)}, 5).status == Status::NotCovered);
  auto v = hdr_necessary({2, Rational(0), Rational(1), Rational(1)}, 9);
  CHECK(v.status == Status::Fails);
  CHECK(v.violated("k <= s + 1"));
  v = hdr_necessary({1, Rational(0), Rational(1), Rational(2)}, 3);
  CHECK(v.status == Status::Fails);
  CHECK(v.violated("k < sigma_p"));
  // s + ell = k makes the shifted Knapp fraction infinite
  v = hdr_necessary({2, Rational(1), Rational(1), Rational(1)}, 11);
  CHECK(v.violated("k ell / (s + ell - k) <= kappa_p"));
  CHECK_THROWS_AS(hdr_necessary({0, Rational(0), Rational(1), Rational(1)}, 5), domain_error);
}

TEST_CASE("sufficient test for higher derivative restriction") {
  // ell = m/(m-1), p = (2d+2)/(d+3+2m), m = 2
  CHECK(hdr_sufficient({1, Rational(0), Rational(2), Rational(8, 7)}, 7).status == Status::Holds);
  CHECK(hdr_sufficient({1, Rational(0), Rational(0), Rational(1)}, 5).status == Status::Fails);
  CHECK(hdr_sufficient({1, Rational(0), Rational(3, 2), Rational(1)}, 9).status == Status::Holds);
  // the friendly point needed here exists only for d > 5
  CHECK(hdr_sufficient({1, Rational(0), Rational(2), Rational(1)}, 5).status == Status::NotCovered);
  CHECK(hdr_sufficient({1, Rational(0), Rational(2), Rational(1)}, 7).status == Status::Holds);
}

TEST_CASE("closed form rejects parameters outside its hypotheses") {
  CHECK_THROWS_AS(hdr_closed_form({1, Rational(0), Rational(1), Rational(1)}, 5), domain_error);
  CHECK_THROWS_AS(hdr_closed_form({1, Rational(0), Rational(1), Rational(7, 6)}, 5), domain_error);
}

TEST_CASE("hull path matches the closed form on integer kappa") {
  long bad = 0, total = 0;
  for (int d = 4; d <= 15; ++d)
    for (int kap = 1; 2 * kap < d - 1; ++kap) {
      Rational p(2 * (d + 1), 2 * kap + d + 3);
      REQUIRE(exponents({d, p}).kappa == Rational(kap));
      for (int e8 = 0; e8 <= 32; ++e8)
        for (int k = 1; k <= kap; ++k)
          for (int s4 = 0; s4 <= 4 * kap; ++s4) {
            HDRQuery q{k, Rational(s4, 4), Rational(e8, 8), p};
            ++total;
            bool a = hdr_sufficient(q, d).status == Status::Holds;
            bool b = hdr_closed_form(q, d).status == Status::Holds;
            if (a != b) ++bad;
          }
    }
  INFO(total << " queries");
  CHECK(bad == 0);
}

TEST_CASE("sufficient never contradicts necessary") {
  long bad = 0;
  for (int d = 2; d <= 12; ++d)
    for (const auto& p : kSweepP)
      for (const auto& ell : kSweepEll)
        for (int k = 1; k <= 6; ++k)
          for (int s2 = 0; s2 <= 12; ++s2) {
            HDRQuery q{k, Rational(s2, 2), ell, p};
            if (hdr_sufficient(q, d).status == Status::Holds && hdr_necessary(q, d).status == Status::Fails) ++bad;
          }
  CHECK(bad == 0);
}

TEST_CASE("verdicts are monotone in s") {
  for (int d = 2; d <= 12; ++d)
    for (const auto& p : kSweepP)
      for (int k = 1; k <= 5; ++k) {
        ParamTuple pt{d, p};
        bool rs = false, vr = false;
        for (int s4 = 0; s4 <= 32; ++s4) {
          Rational s(s4, 4);
          bool r = restriction_sobolev_verdict(k, s, pt).status == Status::Holds;
          bool v = vanishing_restriction_verdict(k, s, pt).status == Status::Holds;
          CHECK((!rs || r));
          CHECK((!vr || v));
          rs = rs || r;
          vr = vr || v;
        }
        for (const auto& ell : kSweepEll) {
          bool h = false;
          for (int s4 = 0; s4 <= 32; ++s4) {
            bool now = hdr_sufficient({k, Rational(s4, 4), ell, p}, d).status == Status::Holds;
            CHECK((!h || now));
            h = h || now;
          }
        }
      }
}

TEST_CASE("surface inequality is monotone in p") {
  const std::vector<Rational> ps{Rational(1), Rational(11, 10), Rational(6, 5), Rational(5, 4), Rational(4, 3),
                                 Rational(3, 2)};
  for (int d = 2; d <= 9; ++d)
    for (int a = 0; a <= 3; ++a)
      for (int b = 0; b <= 3; ++b)
        for (int g2 = 0; g2 < d - 1; ++g2) {
          bool later_holds = false;
          for (auto it = ps.rbegin(); it != ps.rend(); ++it) {
            bool h = si_verdict({a, b, Rational(g2, 2), *it}, d).status == Status::Holds;
            CHECK((!later_holds || h));
            later_holds = later_holds || h;
          }
        }
}

TEST_CASE("surface inequality with beta = 0 reproduces restriction sobolev") {
  for (int d = 2; d <= 9; ++d)
    for (const auto& p : kSweepP)
      for (int a = 0; a <= 3; ++a)
        for (int g2 = 0; g2 < d - 1; ++g2) {
          Rational g(g2, 2);
          auto si = si_verdict({a, 0, g, p}, d);
          auto rs = restriction_sobolev_verdict(a, g, {d, p});
          auto sigma = exponents({d, p}).sigma;
          if (p == Rational(1) && Rational(a) == sigma) continue;  // endpoint rules differ
          INFO("d=" << d << " p=" << p << " alpha=" << a << " gamma=" << g);
          CHECK(si.status == rs.status);
        }
}

TEST_CASE("strichartz verdicts") {
  CHECK(strichartz_verdict({0, 0, Rational(0), Rational(2)}, fin(Rational(2)), Rational(2), 4).status == Status::Fails);
  CHECK(strichartz_verdict({0, 0, Rational(0), Rational(1)}, fin(Rational(1)), Rational(1), 3).status == Status::Holds);
  auto v = strichartz_verdict({1, 0, Rational(1), Rational(2)}, fin(Rational(4)), Rational(2), 8);
  CHECK(v.status == Status::Fails);
  CHECK(v.violated("gamma - alpha > 1/2 - 1/r"));
  CHECK_THROWS_AS(strichartz_verdict({0, 0, Rational(0), Rational(1)}, fin(Rational(1, 2)), Rational(1), 3),
                  domain_error);
}

TEST_CASE("stein weiss verdicts") {
  CHECK(steinweiss_verdict(Rational(0), Rational(1), fin(Rational(2))).status == Status::Fails);
  CHECK(steinweiss_verdict(Rational(0), Rational(3, 2), fin(Rational(2))).status == Status::Holds);
  CHECK(steinweiss_verdict(Rational(1), Rational(-1), fin(Rational(1))).status == Status::Holds);
  CHECK(steinweiss_verdict(Rational(1, 2), Rational(1), fin(Rational(2))).status == Status::Holds);
  CHECK(steinweiss_verdict(Rational(0), Rational(1), fin(Rational(4, 3))).status == Status::Holds);
  CHECK(steinweiss_verdict(Rational(1, 4), Rational(1, 4), fin(Rational(2))).status == Status::Fails);
  CHECK(steinweiss_verdict(Rational(1), Rational(1), Exponent::inf()).status == Status::Holds);
  CHECK_THROWS_AS(steinweiss_verdict(Rational(0), Rational(0), fin(Rational(1, 2))), domain_error);
}

TEST_CASE("stein weiss verdict is monotone in a") {
  for (const auto& p : {fin(Rational(1)), fin(Rational(4, 3)), fin(Rational(2))})
    for (int b4 = -4; b4 <= 8; ++b4) {
      bool held = false;
      for (int a8 = 0; a8 <= 16; ++a8) {
        bool h = steinweiss_verdict(Rational(a8, 8), Rational(b4, 4), p).status == Status::Holds;
        CHECK((!held || h));
        held = held || h;
      }
    }
}

TEST_CASE("boundary flags mark equality") {
  auto v = restriction_sobolev_verdict(2, Rational(2), {9, Rational(1)});
  REQUIRE(v.find("2k - s <= kappa_p"));
  CHECK_FALSE(v.find("2k - s <= kappa_p")->boundary);
  v = restriction_sobolev_verdict(2, Rational(0), {9, Rational(1)});
  CHECK(v.status == Status::Fails);
  v = vanishing_restriction_verdict(2, Rational(0), {9, Rational(1)});
  CHECK(v.find("2k <= kappa_p")->boundary);
}
