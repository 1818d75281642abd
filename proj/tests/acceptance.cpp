// SPDX-License-Identifier: Apache-2.0
// Acceptance runner: one PASS/FAIL line per criterion.
#include "rlab/extremizers.hpp"
#include "rlab/fourier.hpp"
#include "rlab/hdr.hpp"
#include "rlab/region.hpp"
#include "rlab/seq.hpp"
#include "rlab/steinweiss.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <tuple>
#include <vector>

using namespace rlab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double n = static_cast<double>(x.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Closed form against the hull path on integer kappa_p.
Outcome region_oracle() {
  auto t0 = std::chrono::steady_clock::now();
  long total = 0, bad = 0;
  const std::vector<Rational> ells{Rational(1, 2), Rational(1), Rational(3, 2), Rational(2), Rational(3)};
  for (int d : {5, 7, 9, 11}) {
    for (int kap = 1; 2 * kap < d - 1; ++kap) {
      Rational p(2 * (d + 1), 2 * kap + d + 3);  // kappa_p = kap, p > 1
      for (const auto& ell : ells)
        for (int k = 1; k <= kap; ++k)
          for (int s4 = 0; s4 <= 4 * kap; ++s4) {
            HDRQuery q{k, Rational(s4, 4), ell, p};
            bool a = hdr_sufficient(q, d).status == Status::Holds;
            bool b = hdr_closed_form(q, d).status == Status::Holds;
            ++total;
            if (a != b) ++bad;
          }
    }
  }
  double t = seconds_since(t0);
  return {bad == 0 && t < 10.0, fmt("%ld queries, %ld disagreements, %.2f s", total, bad, t)};
}

Outcome consistency() {
  long total = 0, bad = 0;
  const std::vector<Rational> ps{Rational(1), Rational(9, 8), Rational(6, 5), Rational(4, 3)};
  const std::vector<Rational> ells{Rational(1, 2), Rational(1), Rational(3, 2), Rational(2), Rational(3)};
  for (int d = 2; d <= 12; ++d)
    for (const auto& p : ps)
      for (const auto& ell : ells)
        for (int k = 1; k <= 6; ++k)
          for (int s2 = 0; s2 <= 12; ++s2) {
            HDRQuery q{k, Rational(s2, 2), ell, p};
            ++total;
            if (hdr_sufficient(q, d).status == Status::Holds && hdr_necessary(q, d).status == Status::Fails) ++bad;
          }
  return {bad == 0, fmt("%ld queries, %ld violations", total, bad)};
}

Outcome knapp() {
  auto t0 = std::chrono::steady_clock::now();
  FamilySpec fs;
  fs.kind = FamilyKind::Knapp;
  fs.d = 2;
  fs.k = 1;
  fs.s = Rational(0);
  fs.p = Rational(1);
  fs.vanishing = 1;
  fs.n_values = geometric_n(4, 12);
  Family fam = make_family(fs);
  auto lhs = lhs_series(fam), rhs = rhs_series(fam);
  double kappa = exponents(ParamTuple{2, Rational(1)}).kappa.to_double();
  auto fl = fit_exponent(lhs, 2.0, 0.05);
  auto fr = fit_exponent(rhs, kappa, 0.0);
  auto ratio = fit_exponent(ratio_series(lhs, rhs), 2.0 - kappa, 0.05);
  bool fails = restriction_sobolev_verdict(1, Rational(0), ParamTuple{2, Rational(1)}).status == Status::Fails;
  bool sign_ok = fails == (ratio.slope > detail::divergence_tolerance);
  double t = seconds_since(t0);
  bool ok = std::abs(fl.slope - 2.0) <= 0.05 && std::abs(fr.slope - kappa) <= 1e-12 && sign_ok && t < 60.0;
  return {ok, fmt("lhs slope %.4f, rhs slope %.15f, ratio slope %.4f, verdict %s, %.2f s", fl.slope, fr.slope,
                  ratio.slope, fails ? "Fails" : "Holds", t)};
}

Outcome shift() {
  bool ok = true;
  std::string detail;
  for (int s : {0, 1}) {
    FamilySpec fs;
    fs.kind = FamilyKind::Shift;
    fs.d = 3;
    fs.k = 1;
    fs.s = Rational(s);
    fs.p = Rational(1);
    fs.n_values = geometric_n(4, 10);
    Family fam = make_family(fs);
    auto lhs = lhs_series(fam), rhs = rhs_series(fam);
    auto fit = fit_exponent(lhs, 1.0 - s, 0.1);
    double var = 0.0;
    for (const auto& pt : rhs) var = std::max(var, std::abs(pt.value - rhs[0].value) / rhs[0].value);
    ok = ok && fit.slope >= 1.0 - s - 0.1 && var <= 1e-12;
    detail += fmt("s=%d lhs slope %.4f rhs spread %.1e; ", s, fit.slope, var);
  }
  return {ok, detail};
}

Outcome surface() {
  FamilySpec fs;
  fs.kind = FamilyKind::SurfaceMeasure;
  fs.d = 2;
  fs.k = 0;
  fs.p = Rational(1);
  for (int n = 1; n <= 9; ++n) fs.n_values.push_back(n);
  auto rhs = rhs_series(make_family(fs));
  double sigma = exponents(ParamTuple{2, Rational(1)}).sigma.to_double();
  auto fit = fit_exponent(rhs, sigma, 0.1, true);
  return {std::abs(fit.slope - sigma) <= 0.1, fmt("slope %.4f against %.2f, r^2 %.5f", fit.slope, sigma, fit.r_squared)};
}

Outcome decay() {
  auto chart = paraboloid_chart(2, 2048);
  auto psi = bump_window(0.9 * chart.U);
  auto phi = chart.sample([&](const ZPoint& z) { return cplx(psi(z)); });
  std::vector<double> x, y;
  for (int e = 0; e <= 12; ++e) {
    double xd = 4.0 * std::pow(2.0, 0.5 * e);
    auto E = extension_operator(phi, chart, SampleRange{xd, xd, 1}, 0.0, 2);
    double sup = 0.0;
    for (const auto& v : E.data) sup = std::max(sup, std::abs(v));
    x.push_back(std::log(xd));
    y.push_back(std::log(sup));
  }
  double slope = ls_slope(x, y);
  return {std::abs(slope + 0.5) <= 0.05, fmt("sup-norm slope %.4f over x_d in [4, 256]", slope)};
}

Outcome dichotomy() {
  auto p = Exponent::finite(Rational(2));
  auto table = sw::dichotomy_scan(p);
  auto cell = sw::classify_growth(0.0, 1.0, p);
  bool ok = table.agreement_rate() >= 0.95 && table.disagreements_far == 0 &&
            cell.growth == sw::Growth::LogDivergent && cell.log_r_squared >= 0.95;
  return {ok, fmt("agreement %.4f, %zu disagreements (%zu far), a=0 b=1 %s r^2 %.4f", table.agreement_rate(),
                  table.disagreements, table.disagreements_far, sw::to_string(cell.growth).c_str(), cell.log_r_squared)};
}

Outcome sequences() {
  double worst = 0.0;
  for (int m = 1; m <= 10; ++m) {
    auto tc = trig_coefficients(m);
    for (int i = 0; i <= 200; ++i) worst = std::max(worst, std::abs(tc.residual(i * std::numbers::pi / 200.0)));
  }
  std::mt19937_64 rng(20240611);
  int held = 0;
  for (int i = 0; i < 1000; ++i)
    if (convex_sequence_bound(random_convex_instance(rng)).satisfied) ++held;
  return {worst < 1e-12 && held == 1000, fmt("trig residual %.2e, convex bound %d/1000", worst, held)};
}

Outcome norms() {
  auto chart = paraboloid_chart(2, 1024);
  auto psi = plateau_window(chart);
  auto g = chart.sample([&](const ZPoint& z) { return cplx(psi(z) * std::cos(7 * z[0]), psi(z) * z[0]); });
  double pl = std::abs(sobolev_norm(g, 0.0, false, 4) - l2_norm(g)) / l2_norm(g);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  double calib = 0.0, worst = 0.0;
  for (int t = 0; t < 10; ++t) {
    ComplexGrid f({32}, {1.0 / 32}, {-0.5});
    double c1 = 0.3 * u(rng), c2 = 0.3 * u(rng);
    double w1 = 0.15 + 0.1 * std::abs(u(rng)), w2 = 0.15 + 0.1 * std::abs(u(rng));
    double A = u(rng), B = u(rng);
    for (std::size_t i = 0; i < 32; ++i) {
      double x = f.coord(0, i);
      f[i] = A * bump((x - c1) / w1) + B * bump((x - c2) / w2) + cplx(0, 0.5) * bump(x / 0.45);
    }
    double q = riesz_double_sum(f, 0.25) / std::pow(sobolev_norm(f, 0.25, true, 256), 2);
    if (t == 0) calib = q;
    worst = std::max(worst, std::abs(q / calib - 1.0));
  }
  auto dc = dyadic_partition_check(0.25, 2, std::ldexp(1.0, -10), 0.5);
  bool ok = pl < 1e-10 && worst <= 0.05 && dc.max_rel_error < 1e-3;
  return {ok, fmt("Plancherel %.1e, double sum spread %.4f (constant %.4f), dyadic %.1e", pl, worst, calib,
                  dc.max_rel_error)};
}

Outcome kernel() {
  auto chart = paraboloid_chart(2, 2048);
  auto psi = plateau_window(chart);
  bool ok = true;
  std::string detail;
  for (auto [al, be, gm] : {std::tuple{0u, 1u, 0.25}, std::tuple{1u, 0u, 0.5}}) {
    double qmin = 1e300, qmax = 0.0, rd = 0.0;
    bool conv = true;
    for (int i = 0; i < 10; ++i)
      for (int j = 0; j < 10; ++j) {
        double xd = -40 + 80 * (i + 0.5) / 10, yd = -40 + 80 * (j + 0.37) / 10;
        auto e = si_kernel_report({0.0, xd, 0.0}, {0.0, yd, 0.0}, al, be, gm, chart, psi);
        conv = conv && e.converged;
        rd = std::max(rd, e.rel_diff);
        double q = std::abs(e.value) / kernel_envelope(xd, yd, al, be, gm, 2);
        qmin = std::min(qmin, q);
        qmax = std::max(qmax, q);
      }
    ok = ok && conv && qmax / qmin < 50.0;
    detail += fmt("(%u,%u,%g) quotient ratio %.3f, level gap %.1e; ", al, be, gm, qmax / qmin, rd);
  }
  return {ok, detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"region oracle", region_oracle}, {"consistency sweep", consistency}, {"knapp exponents", knapp},
      {"shift exponents", shift},       {"surface measure", surface},       {"extension decay", decay},
      {"weighted dichotomy", dichotomy}, {"sequence lemmas", sequences},    {"norm self-checks", norms},
      {"kernel bound", kernel}};
  int failed = 0, idx = 0;
  for (const auto& [name, run] : criteria) {
    ++idx;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    if (!o.pass) ++failed;
    while (!o.detail.empty() && (o.detail.back() == ' ' || o.detail.back() == ';')) o.detail.pop_back();
    std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", idx, name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
