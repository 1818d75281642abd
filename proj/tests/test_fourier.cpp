// SPDX-License-Identifier: Apache-2.0
#include "rlab/fourier.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace rlab;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

ComplexGrid random_grid(std::mt19937_64& rng, std::size_t n, int rank) {
  std::normal_distribution<double> g;
  std::vector<std::size_t> dims(static_cast<std::size_t>(rank), n);
  ComplexGrid f(dims, std::vector<double>(dims.size(), 1.0 / n), std::vector<double>(dims.size(), -0.5));
  for (auto& v : f.data) v = cplx(g(rng), g(rng));
  return f;
}
}  // namespace

TEST_CASE("paraboloid chart is flat at the origin") {
  for (int d : {2, 3}) {
    auto c = paraboloid_chart(d, 64);
    CHECK(std::abs(c.h({0.0, 0.0})) < 1e-10);
    CHECK(c.gradient_norm({0.0, 0.0}) < 1e-10);
    CHECK(c.blank().rank() == static_cast<std::size_t>(d - 1));
  }
  CHECK_THROWS_AS(paraboloid_chart(4), domain_error);
}

TEST_CASE("graph chart enforces the smallness conditions") {
  auto flat = graph_chart(2, [](const ZPoint& z) { return 0.01 * z[0] * z[0]; }, {}, 256);
  CHECK(flat.gradient_norm({0.25, 0.0}) == Catch::Approx(0.005).epsilon(1e-6));
  CHECK_THROWS_AS(graph_chart(2, [](const ZPoint& z) { return 3.0 * z[0] * z[0]; }, {}, 256), domain_error);
  CHECK_THROWS_AS(graph_chart(2, [](const ZPoint& z) { return 0.01 * z[0] + 1.0; }, {}, 256), domain_error);
}

TEST_CASE("profile derivatives respect the vanishing order") {
  auto env = [](const ZPoint& z) { return cplx(1.0 + z[0]); };
  SpectralProfile p2{env, gaussian_factor(), 2};
  for (unsigned a = 0; a < 2; ++a) CHECK(p2.transverse_derivative(0.0, a) == cplx(0.0));
  SpectralProfile p1{env, gaussian_factor(), 1};
  CHECK(p1.transverse_derivative(0.0, 0) == cplx(0.0));
  // one surviving Leibniz term: 1! g(zeta) w(0)
  CHECK(std::abs(p1.derivative({0.3, 0.0}, 0.0, 1) - cplx(1.3)) < 1e-14);
  // two transverse derivatives of exp(-pi t^2) at 0
  SpectralProfile p0{env, gaussian_factor(), 0};
  CHECK(std::abs(p0.transverse_derivative(0.0, 2) + 2.0 * std::numbers::pi) < 1e-12);
  CHECK_THROWS_AS(p0.transverse_derivative(0.0, 100), domain_error);
}

TEST_CASE("profile derivatives agree with central differences") {
  SpectralProfile p{[](const ZPoint&) { return cplx(1.0); }, gaussian_factor(std::numbers::pi, cplx(0.0, 1.0)), 1};
  for (double t : {-0.4, 0.1, 0.7}) {
    const double e = 1e-3;
    cplx fd = (p.transverse_derivative(t + e, 1) - p.transverse_derivative(t - e, 1)) / (2 * e);
    CHECK(std::abs(fd - p.transverse_derivative(t, 2)) < 1e-4 * (1.0 + std::abs(fd)));
  }
}

TEST_CASE("shifted profile trace carries the phase") {
  auto c = paraboloid_chart(2, 128);
  SpectralProfile base{[](const ZPoint& z) { return cplx(bump(2 * z[0])); }, gaussian_factor(), 0};
  auto sh = shifted(base, 3.0, c);
  auto t0 = surface_trace(base, c, 0), t1 = surface_trace(sh, c, 0);
  double err = 0.0;
  for (std::size_t i = 0; i < t0.size(); ++i) {
    double z = c.node(i);
    err = std::max(err, std::abs(t1[i] - t0[i] * std::exp(cplx(0.0, two_pi * 3.0 * z * z))));
  }
  CHECK(err < 1e-13);
}

TEST_CASE("Plancherel at gamma = 0") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 100; ++i) {
    auto f = random_grid(rng, 64, i % 2 ? 2 : 1);
    CHECK(rel(sobolev_norm(f, 0.0, false, 1 + i % 3), l2_norm(f)) < 1e-10);
  }
}

TEST_CASE("inhomogeneous norm decreases in gamma") {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 20; ++i) {
    auto f = random_grid(rng, 64, 1);
    double prev = sobolev_norm(f, 0.0, false);
    for (double g : {0.1, 0.25, 0.5, 1.0, 2.0}) {
      double now = sobolev_norm(f, g, false);
      CHECK(now < prev);
      prev = now;
    }
  }
}

TEST_CASE("windowing leaves functions supported on the plateau unchanged") {
  auto c = paraboloid_chart(2, 512);
  auto psi = plateau_window(c);
  auto f = c.sample([](const ZPoint& z) { return cplx(bump(z[0] / 0.2), 0.3 * bump((z[0] - 0.05) / 0.1)); });
  auto g = apply_window(f, c, psi);
  CHECK(rel(sobolev_norm(g, 0.25, true, 4), sobolev_norm(f, 0.25, true, 4)) < 1e-12);
  CHECK(rel(sobolev_norm(g, 0.5, false, 4), sobolev_norm(f, 0.5, false, 4)) < 1e-12);
  CHECK(rel(lp_norm(g, 1.0), lp_norm(f, 1.0)) < 1e-12);
}

TEST_CASE("homogeneous norm follows the dilation law") {
  auto c = paraboloid_chart(2, 256);
  auto gauss = [&](double lam) {
    return c.sample([&](const ZPoint& z) {
      double u = z[0] * 8 / lam;
      return cplx(std::exp(-std::numbers::pi * u * u) / lam);
    });
  };
  double ratio = sobolev_norm(gauss(2), 0.25, true, 256) / sobolev_norm(gauss(1), 0.25, true, 256);
  CHECK(rel(ratio, std::pow(2.0, 0.25 - 0.5)) < 0.02);
  CHECK_THROWS_AS(sobolev_norm(gauss(1), 0.5, true), domain_error);
}

TEST_CASE("double sum matches the homogeneous norm up to one constant") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> q;
  for (int t = 0; t < 10; ++t) {
    ComplexGrid f({32}, {1.0 / 32}, {-0.5});
    double c1 = 0.3 * u(rng), c2 = 0.3 * u(rng), w1 = 0.15 + 0.1 * std::abs(u(rng)),
           w2 = 0.15 + 0.1 * std::abs(u(rng)), A = u(rng), B = u(rng);
    for (std::size_t i = 0; i < 32; ++i) {
      double x = f.coord(0, i);
      f[i] = A * bump((x - c1) / w1) + B * bump((x - c2) / w2) + cplx(0, 0.5) * bump(x / 0.45);
    }
    q.push_back(riesz_double_sum(f, 0.25) / std::pow(sobolev_norm(f, 0.25, true, 256), 2));
  }
  for (double v : q) CHECK(std::abs(v / q[0] - 1.0) < 0.05);
  CHECK_THROWS_AS(riesz_double_sum(ComplexGrid({4, 4}, {1.0, 1.0}, {0.0, 0.0}), 0.25), domain_error);
}

TEST_CASE("besov norm") {
  ComplexGrid zero({64}, {1.0 / 64}, {-0.5});
  CHECK(besov_norm(zero, 2) == 0.0);
  // a wide modulated Gaussian has its spectrum inside the block [8, 16)
  ComplexGrid f({2048}, {1.0 / 64}, {-16.0});
  for (std::size_t i = 0; i < f.size(); ++i) {
    double x = f.coord(0, i);
    f[i] = std::exp(-std::numbers::pi * x * x / 16.0) * std::exp(cplx(0.0, two_pi * 12.0 * x));
  }
  CHECK(rel(besov_norm(f, 2), std::pow(2.0, -2.0) * l2_norm(f)) < 1e-6);
  // the embedding into H^{-s} for s > (d-1)/2 holds with a uniform constant
  std::mt19937_64 rng(8);
  for (int i = 0; i < 20; ++i) {
    auto g = random_grid(rng, 128, 1);
    CHECK(sobolev_norm(g, 0.75, false) <= 4.0 * besov_norm(g, 2));
  }
}

TEST_CASE("lebesgue and mixed norms") {
  Grid<double> cell({16, 16}, {0.25, 0.5}, {0.0, 0.0});
  cell[17] = 1.0;
  CHECK(lp_norm(cell, 1.0) == Catch::Approx(0.125));
  CHECK(lp_norm(cell, 3.0) == Catch::Approx(std::pow(0.125, 1.0 / 3.0)));
  CHECK(lp_norm(cell, std::numeric_limits<double>::infinity()) == 1.0);
  Grid<double> g({512, 512}, {8.0 / 512, 8.0 / 512}, {-4.0, -4.0});
  for (std::size_t i = 0; i < g.size(); ++i) {
    double x = g.coord(0, i / 512), y = g.coord(1, i % 512);
    g[i] = std::exp(-std::numbers::pi * (x * x + y * y));
  }
  CHECK(rel(lp_norm(g, 1.0), 1.0) < 1e-3);
  for (double p : {1.0, 2.0, 3.5}) CHECK(rel(mixed_norm(g, p, p), lp_norm(g, p)) < 1e-12);
}

TEST_CASE("extension at x_d = 0 is an inverse transform") {
  auto c = paraboloid_chart(2, 64);
  auto phi = c.sample([](const ZPoint& z) { return cplx(bump(z[0] / 0.45), 0.2 * z[0]); });
  auto E = extension_operator(phi, c, SampleRange{0.0, 0.0, 1}, 0.0, 2);
  double h = c.spacing(), err = 0.0;
  for (std::size_t s = 0; s < E.dims[1]; s += 7) {
    double x = E.coord(1, s);
    cplx direct = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i) direct += h * phi[i] * std::exp(cplx(0.0, two_pi * x * c.node(i)));
    err = std::max(err, std::abs(direct - E[s]));
  }
  CHECK(err < 1e-12);
}

TEST_CASE("extension preserves the L2 norm of every slice") {
  for (int d : {2, 3}) {
    auto c = paraboloid_chart(d, d == 2 ? 256 : 32);
    auto psi = bump_window(0.45);
    auto phi = c.sample([&](const ZPoint& z) { return cplx(psi(z) * std::cos(5 * z[0]), psi(z)); });
    auto E = extension_operator(phi, c, SampleRange{-8.0, 8.0, 9}, 0.0, 2);
    std::size_t slice = E.size() / E.dims[0];
    std::vector<double> norms;
    for (std::size_t t = 0; t < E.dims[0]; ++t) {
      double acc = 0.0;
      for (std::size_t i = 0; i < slice; ++i) acc += std::norm(E[t * slice + i]);
      norms.push_back(std::sqrt(acc));
    }
    for (double n : norms) CHECK(rel(n, norms[0]) < 1e-8);
  }
}

TEST_CASE("extension sup norm decays like |x_d|^{-1/2}") {
  auto c = paraboloid_chart(2, 2048);
  auto psi = bump_window(0.9 * c.U);
  auto phi = c.sample([&](const ZPoint& z) { return cplx(psi(z)); });
  auto sup = [&](double xd) {
    auto E = extension_operator(phi, c, SampleRange{xd, xd, 1}, 0.0, 2);
    double m = 0.0;
    for (const auto& v : E.data) m = std::max(m, std::abs(v));
    return m;
  };
  double slope = std::log(sup(256.0) / sup(4.0)) / std::log(64.0);
  CHECK(std::abs(slope + 0.5) < 0.05);
  CHECK_THROWS_AS(extension_operator(phi, c, SampleRange{1e5, 1e5, 1}), domain_error);
}

TEST_CASE("dyadic partition reconstructs the power") {
  for (double g : {0.125, 0.25, 0.375}) {
    auto dc = dyadic_partition_check(g, 2, std::ldexp(1.0, -10), 0.5);
    CHECK(dc.max_rel_error < 1e-3);
    CHECK(dc.max_terms <= 60);
  }
  auto near = dyadic_partition_check(0.999, 3, std::ldexp(1.0, -10), 0.5);
  CHECK(near.max_rel_error < 1e-3);
  auto edge = dyadic_partition_check(0.25, 2, 0.5, 1.0);
  CHECK(edge.boundary_deficit > 0.0);
  CHECK_THROWS_AS(dyadic_partition_check(0.5, 2, 0.1, 0.5), domain_error);
}

TEST_CASE("kernel vanishes on the diagonal when beta >= 1") {
  auto c = paraboloid_chart(2, 256);
  auto psi = plateau_window(c);
  SpacePoint x{0.1, 3.0, 0.0};
  CHECK(si_kernel_report(x, x, 0, 1, 0.25, c, psi).value == cplx(0.0));
  CHECK(si_kernel_gamma_zero(x, x, 1, 2, c, psi) == cplx(0.0));
}

TEST_CASE("kernel tends to the gamma = 0 integral") {
  auto c = paraboloid_chart(2, 2048);
  auto psi = plateau_window(c);
  SpacePoint x{0.1, 5, 0}, y{-0.2, -7, 0};
  auto e = si_kernel_report(x, y, 1, 1, 1e-3, c, psi);
  auto k0 = si_kernel_gamma_zero(x, y, 1, 1, c, psi);
  CHECK(std::abs(delta_normalization(1e-3, 2) * e.value - k0) / std::abs(k0) < 0.02);
}

TEST_CASE("kernel bound quotient is stable over the sample grid") {
  auto c = paraboloid_chart(2, 2048);
  auto psi = plateau_window(c);
  double qmin = 1e300, qmax = 0.0;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) {
      double xd = -40 + 80 * (i + 0.5) / 10, yd = -40 + 80 * (j + 0.37) / 10;
      auto e = si_kernel_report({0.0, xd, 0.0}, {0.0, yd, 0.0}, 1, 1, 0.25, c, psi);
      REQUIRE(e.converged);
      double q = std::abs(e.value) / kernel_envelope(xd, yd, 1, 1, 0.25, 2);
      qmin = std::min(qmin, q);
      qmax = std::max(qmax, q);
    }
  CHECK(qmax / qmin < 50.0);
}

TEST_CASE("kernel quadrature reports disagreeing levels") {
  auto c = paraboloid_chart(2, 2048);
  auto psi = plateau_window(c);
  KernelOptions coarse{16, 0.05};
  CHECK_THROWS_AS(si_kernel_eval({0.0, 30.0, 0.0}, {0.0, -30.0, 0.0}, 1, 0, 0.25, c, psi, coarse), quadrature_error);
}

TEST_CASE("three dimensional kernel converges") {
  auto c = paraboloid_chart(3, 64);
  auto psi = plateau_window(c);
  auto e = si_kernel_report({0.3, 0.1, 3.0}, {-0.2, 0.0, -2.0}, 1, 1, 0.5, c, psi);
  CHECK(e.converged);
  CHECK(std::abs(e.value) > 0.0);
}
