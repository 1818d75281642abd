// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "rlab/fft.hpp"
#include "rlab/grid.hpp"
#include "rlab/numeric.hpp"
#include "rlab/parallel.hpp"
#include "rlab/verdict.hpp"

namespace rlab {

using ZPoint = std::array<double, 2>;  // chart coordinate; second slot unused when d = 2

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// ---------------------------------------------------------------- windows

// exp(-1/(1-t^2)) on (-1, 1), zero outside.
inline double bump(double t) { return std::abs(t) < 1.0 ? std::exp(-1.0 / (1.0 - t * t)) : 0.0; }

// C-infinity step: 0 for s <= 0, 1 for s >= 1.
inline double smooth_step(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  double a = std::exp(-1.0 / s), b = std::exp(-1.0 / (1.0 - s));
  return a / (a + b);
}

// Radial plateau: 1 for rho <= inner, 0 for rho >= outer.
inline double plateau(double rho, double inner, double outer) { return smooth_step((outer - rho) / (outer - inner)); }

using Window = std::function<double(const ZPoint&)>;

// ---------------------------------------------------------------- chart

struct SurfaceChart {
  int d = 2;
  double U = 0.5;
  std::size_t gridN = 2048;
  double r = 0.0;
  bool paraboloid = false;
  std::function<double(const ZPoint&)> h;
  std::function<ZPoint(const ZPoint&)> grad;

  int m() const { return d - 1; }
  double spacing() const { return 2.0 * U / static_cast<double>(gridN); }
  double node(std::size_t i) const { return -U + static_cast<double>(i) * spacing(); }
  double height(const ZPoint& z) const { return h(z) + r; }

  ComplexGrid blank() const {
    std::vector<std::size_t> dims(static_cast<std::size_t>(m()), gridN);
    std::vector<double> sp(dims.size(), spacing()), org(dims.size(), -U);
    return ComplexGrid(dims, sp, org);
  }

  ZPoint point(std::size_t flat) const {
    if (d == 2) return {node(flat), 0.0};
    return {node(flat / gridN), node(flat % gridN)};
  }

  template <class F>
  ComplexGrid sample(F&& f) const {
    ComplexGrid g = blank();
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = f(point(i));
    return g;
  }

  double gradient_norm(const ZPoint& z) const {
    ZPoint g = grad(z);
    return std::hypot(g[0], d == 3 ? g[1] : 0.0);
  }
};

inline std::size_t default_grid_n(int d) { return d == 2 ? 2048 : 128; }

inline void check_chart_dimension(int d) {
  if (d != 2 && d != 3) throw domain_error("numerical charts support d = 2 or d = 3");
}

inline SurfaceChart paraboloid_chart(int d, std::size_t gridN = 0, double U = 0.5, double r = 0.0) {
  check_chart_dimension(d);
  SurfaceChart c;
  c.d = d;
  c.U = U;
  c.gridN = gridN ? gridN : default_grid_n(d);
  c.r = r;
  c.paraboloid = true;
  c.h = [](const ZPoint& z) { return z[0] * z[0] + z[1] * z[1]; };
  c.grad = [](const ZPoint& z) { return ZPoint{2.0 * z[0], 2.0 * z[1]}; };
  if (d == 2) {
    c.h = [](const ZPoint& z) { return z[0] * z[0]; };
    c.grad = [](const ZPoint& z) { return ZPoint{2.0 * z[0], 0.0}; };
  }
  return c;
}

// Graph chart for a user-supplied h. Without an explicit gradient one is
// formed by central differences; it only feeds the checks and the aliasing
// guard. The smallness conditions on the first and second derivatives are
// checked on the grid.
inline SurfaceChart graph_chart(int d, std::function<double(const ZPoint&)> h,
                                std::function<ZPoint(const ZPoint&)> grad = {}, std::size_t gridN = 0,
                                double U = 0.5, double r = 0.0) {
  check_chart_dimension(d);
  SurfaceChart c;
  c.d = d;
  c.U = U;
  c.gridN = gridN ? gridN : default_grid_n(d);
  c.r = r;
  c.h = h;
  const double step = 1e-5;
  if (!grad) {
    grad = [h, d, step](const ZPoint& z) {
      ZPoint g{0.0, 0.0};
      for (int a = 0; a < d - 1; ++a) {
        ZPoint p = z, q = z;
        p[static_cast<std::size_t>(a)] += step;
        q[static_cast<std::size_t>(a)] -= step;
        g[static_cast<std::size_t>(a)] = (h(p) - h(q)) / (2.0 * step);
      }
      return g;
    };
  }
  c.grad = grad;
  ZPoint o{0.0, 0.0};
  if (std::abs(h(o)) > 1e-10) throw domain_error("chart requires h(0) = 0");
  if (c.gradient_norm(o) > 1e-8) throw domain_error("chart requires grad h(0) = 0");
  auto hess = [&](const ZPoint& z) {
    std::array<double, 4> H{0, 0, 0, 0};
    for (int a = 0; a < d - 1; ++a)
      for (int b = 0; b < d - 1; ++b) {
        ZPoint p = z, q = z;
        p[static_cast<std::size_t>(b)] += step;
        q[static_cast<std::size_t>(b)] -= step;
        H[static_cast<std::size_t>(2 * a + b)] =
            (grad(p)[static_cast<std::size_t>(a)] - grad(q)[static_cast<std::size_t>(a)]) / (2.0 * step);
      }
    return H;
  };
  auto H0 = hess(o);
  double det0 = d == 2 ? H0[0] : H0[0] * H0[3] - H0[1] * H0[2];
  if (std::abs(det0) < 1e-12) throw domain_error("chart requires a nondegenerate Hessian at 0");
  std::size_t stride = std::max<std::size_t>(1, c.gridN / 64);
  std::size_t npts = d == 2 ? c.gridN : c.gridN * c.gridN;
  for (std::size_t i = 0; i < npts; i += (d == 2 ? stride : 1)) {
    if (d == 3 && ((i / c.gridN) % stride || (i % c.gridN) % stride)) continue;
    ZPoint z = c.point(i);
    if (c.gradient_norm(z) > 1.0 / (10.0 * d)) throw domain_error("chart gradient exceeds 1/(10d)");
    auto H = hess(z);
    double dev = 0.0;  // Frobenius norm bounds the operator norm
    for (int k = 0; k < 4; ++k) dev += (H[static_cast<std::size_t>(k)] - H0[static_cast<std::size_t>(k)]) *
                                       (H[static_cast<std::size_t>(k)] - H0[static_cast<std::size_t>(k)]);
    if (std::sqrt(dev) > 0.1 * std::abs(det0)) throw domain_error("chart Hessian varies beyond tolerance");
  }
  return c;
}

// Window equal to 1 for |zeta| <= U/2 and vanishing for |zeta| >= 0.9 U.
inline Window plateau_window(const SurfaceChart& c, double inner_frac = 0.5, double outer_frac = 0.9) {
  double inner = inner_frac * c.U, outer = outer_frac * c.U;
  return [inner, outer](const ZPoint& z) { return plateau(std::hypot(z[0], z[1]), inner, outer); };
}

// Radial bump exp(1 - 1/(1 - rho^2)) scaled to radius R, normalized to 1 at 0.
inline Window bump_window(double R) {
  return [R](const ZPoint& z) { return std::exp(1.0) * bump(std::hypot(z[0], z[1]) / R); };
}

inline ComplexGrid apply_window(const ComplexGrid& f, const SurfaceChart& c, const Window& psi) {
  ComplexGrid g = f;
  for (std::size_t i = 0; i < g.size(); ++i) g[i] *= psi(c.point(i));
  return g;
}

// ---------------------------------------------------------------- profiles

inline double binomial(unsigned n, unsigned k) {
  double b = 1.0;
  for (unsigned i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

// A function of the transverse variable t = xi_d - h(zeta) with closed-form
// derivatives up to max_order.
struct TransverseFactor {
  std::function<cplx(double t, unsigned j)> jet;
  unsigned max_order = 0;
};

// poly(t) exp(-a t^2 + b t); the j-th derivative is P_j(t) exp(...) with
// P_0 = poly and P_{j+1} = P_j' + q' P_j.
inline TransverseFactor gaussian_factor(double a = std::numbers::pi, cplx b = 0.0, unsigned max_order = 24,
                                        std::vector<cplx> poly = {1.0}) {
  TransverseFactor f;
  f.max_order = max_order;
  f.jet = [a, b, poly](double t, unsigned j) {
    std::vector<cplx> P = poly;
    for (unsigned step = 0; step < j; ++step) {
      std::vector<cplx> Q(P.size() + 1, 0.0);
      for (std::size_t i = 1; i < P.size(); ++i) Q[i - 1] += static_cast<double>(i) * P[i];
      for (std::size_t i = 0; i < P.size(); ++i) {
        Q[i] += b * P[i];
        Q[i + 1] += -2.0 * a * P[i];
      }
      P = std::move(Q);
    }
    cplx v = 0.0;
    for (std::size_t i = P.size(); i-- > 0;) v = v * t + P[i];
    return v * std::exp(-a * t * t + b * t);
  };
  return f;
}

// \hat f(zeta, xi_d) = envelope(zeta) * t^vanishing * w(t), t = xi_d - h(zeta).
struct SpectralProfile {
  std::function<cplx(const ZPoint&)> envelope;
  TransverseFactor transverse;
  unsigned vanishing = 0;

  unsigned max_order() const { return transverse.max_order; }

  // d^alpha/dt^alpha of t^k w(t) by the Leibniz rule; terms with a positive
  // power of t vanish exactly at t = 0.
  cplx transverse_derivative(double t, unsigned alpha) const {
    if (alpha > max_order()) throw domain_error("derivative order beyond the profile rule");
    cplx s = 0.0;
    unsigned k = vanishing;
    for (unsigned j = 0; j <= std::min(alpha, k); ++j) {
      double falling = 1.0;
      for (unsigned i = 0; i < j; ++i) falling *= static_cast<double>(k - i);
      double tp = (k - j == 0) ? 1.0 : std::pow(t, static_cast<double>(k - j));
      if (tp == 0.0) continue;
      s += binomial(alpha, j) * falling * tp * transverse.jet(t, alpha - j);
    }
    return s;
  }

  cplx derivative(const ZPoint& z, double t, unsigned alpha) const { return envelope(z) * transverse_derivative(t, alpha); }
};

// Multiplies \hat f by exp(2 pi i n xi_d).
inline SpectralProfile shifted(const SpectralProfile& base, double n, const SurfaceChart& chart) {
  SpectralProfile p = base;
  auto env = base.envelope;
  auto h = chart.h;
  p.envelope = [env, h, n](const ZPoint& z) { return env(z) * std::exp(cplx(0.0, two_pi * n * h(z))); };
  auto w = base.transverse.jet;
  cplx c(0.0, two_pi * n);
  p.transverse.jet = [w, c](double t, unsigned alpha) {
    cplx s = 0.0, cj = 1.0;
    for (unsigned j = 0; j <= alpha; ++j) {
      s += binomial(alpha, j) * w(t, alpha - j) * cj;
      cj *= c;
    }
    return s * std::exp(c * t);
  };
  return p;
}

// zeta -> d^alpha \hat f / d xi_d^alpha at (zeta, h(zeta) + r).
inline ComplexGrid surface_trace(const SpectralProfile& profile, const SurfaceChart& chart, unsigned alpha) {
  cplx tfac = profile.transverse_derivative(chart.r, alpha);
  return chart.sample([&](const ZPoint& z) { return tfac == 0.0 ? cplx(0.0) : profile.envelope(z) * tfac; });
}

// ---------------------------------------------------------------- norms

enum class NormKind { SobolevInhom, SobolevHom, Besov, Lp, Mixed };

struct NormSpec {
  NormKind kind = NormKind::SobolevInhom;
  double gamma = 0.0;
  double p = 2.0;
  double r = 2.0;
  std::size_t pad = 1;  // zero-padding factor per axis before the transform
};

// Continuous Fourier transform samples F(z_m) = h^m * DFT(f)_m of a grid
// function zero-padded to pad * n points per axis.
struct Spectrum {
  std::vector<cplx> values;
  std::vector<std::size_t> shape;
  double dz = 0.0;
  int rank = 0;

  template <class F>
  void for_each(F&& f) const {
    std::size_t M = shape[0];
    for (std::size_t i = 0; i < values.size(); ++i) {
      double z0 = static_cast<double>(fft::signed_index(rank == 1 ? i : i / M, M)) * dz;
      double z1 = rank == 2 ? static_cast<double>(fft::signed_index(i % M, M)) * dz : 0.0;
      f(i, std::hypot(z0, z1), values[i]);
    }
  }
};

inline void check_trace_grid(const ComplexGrid& f) {
  if (f.rank() < 1 || f.rank() > 2) throw domain_error("trace grids must have rank 1 or 2");
  for (std::size_t a = 1; a < f.rank(); ++a)
    if (f.dims[a] != f.dims[0] || std::abs(f.spacing[a] - f.spacing[0]) > 1e-14 * f.spacing[0])
      throw domain_error("trace grids must be square with equal spacing");
}

inline Spectrum spectrum(const ComplexGrid& f, std::size_t pad = 1) {
  check_trace_grid(f);
  if (pad == 0) pad = 1;
  Spectrum s;
  s.rank = static_cast<int>(f.rank());
  std::size_t n = f.dims[0], M = n * pad;
  s.shape.assign(f.rank(), M);
  std::size_t total = s.rank == 1 ? M : M * M;
  s.values.assign(total, 0.0);
  if (s.rank == 1)
    for (std::size_t i = 0; i < n; ++i) s.values[i] = f[i];
  else
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) s.values[i * M + j] = f[i * n + j];
  fft::transform(s.values, s.shape, fft::Direction::Forward);
  double hm = std::pow(f.spacing[0], s.rank);
  for (auto& v : s.values) v *= hm;
  s.dz = 1.0 / (static_cast<double>(M) * f.spacing[0]);
  return s;
}

// Sobolev norm of negative order gamma with weight (1+|z|)^{-2 gamma}, or
// |z|^{-2 gamma} with the z = 0 bin dropped when homogeneous.
inline double sobolev_norm(const ComplexGrid& f, double gamma, bool homogeneous, std::size_t pad = 1) {
  check_trace_grid(f);
  int m = static_cast<int>(f.rank());
  if (homogeneous && !(gamma > 0.0 && gamma < 0.5 * m))
    throw domain_error("homogeneous Sobolev norm requires gamma in (0, (d-1)/2)");
  Spectrum s = spectrum(f, pad);
  // The zero cell carries the mean of |z|^{-2 gamma} over the cell (an
  // interval in 1D, the disc of equal area in 2D) instead of being dropped.
  double zero_weight = 0.0;
  if (homogeneous) {
    double e = m - 2.0 * gamma;
    double R = m == 1 ? 0.5 * s.dz : s.dz / std::sqrt(std::numbers::pi);
    double measure = m == 1 ? 2.0 : 2.0 * std::numbers::pi;
    zero_weight = measure * std::pow(R, e) / e / std::pow(s.dz, m);
  }
  NeumaierSum acc;
  s.for_each([&](std::size_t, double z, const cplx& F) {
    double w;
    if (homogeneous) {
      w = z == 0.0 ? zero_weight : std::pow(z, -2.0 * gamma);
    } else {
      w = gamma == 0.0 ? 1.0 : std::pow(1.0 + z, -2.0 * gamma);
    }
    acc.add(std::norm(F) * w);
  });
  return std::sqrt(acc.value() * std::pow(s.dz, m));
}

inline double l2_norm(const ComplexGrid& f) {
  NeumaierSum acc;
  for (const auto& v : f.data) acc.add(std::norm(v));
  return std::sqrt(acc.value() * f.cell_volume());
}

// Direct O(n^2) sum of f(x) conj f(y) |x - y|^{2 gamma - 1} over a 1D grid,
// with the diagonal cells integrated exactly. Equals a multiple of the
// squared homogeneous norm in the continuum limit.
inline double riesz_double_sum(const ComplexGrid& f, double gamma) {
  if (f.rank() != 1) throw domain_error("riesz_double_sum is defined for one-dimensional traces");
  if (!(gamma > 0.0 && gamma < 0.5)) throw domain_error("riesz_double_sum requires gamma in (0, 1/2)");
  double a = 2.0 * gamma - 1.0, h = f.spacing[0];
  std::size_t n = f.dims[0];
  NeumaierSum acc;
  double diag = 2.0 * std::pow(h, a + 2.0) / ((a + 1.0) * (a + 2.0));
  for (std::size_t i = 0; i < n; ++i) {
    acc.add(std::norm(f[i]) * diag);
    for (std::size_t j = i + 1; j < n; ++j)
      acc.add(2.0 * (f[i] * std::conj(f[j])).real() * h * h * std::pow(h * static_cast<double>(j - i), a));
  }
  return acc.value();
}

// sup over dyadic blocks P_0 = {|z| < 1}, P_k = {2^{k-1} <= |z| < 2^k} of
// 2^{-(d-1)k/2} ||P_k f||_2, over the blocks present on the grid.
inline double besov_norm(const ComplexGrid& f, int d, std::size_t pad = 1) {
  check_trace_grid(f);
  if (static_cast<int>(f.rank()) != d - 1) throw domain_error("besov_norm: grid rank must be d-1");
  Spectrum s = spectrum(f, pad);
  std::vector<NeumaierSum> blocks;
  s.for_each([&](std::size_t, double z, const cplx& F) {
    std::size_t k = z < 1.0 ? 0 : static_cast<std::size_t>(std::floor(std::log2(z))) + 1;
    if (k >= 1 && z < std::ldexp(1.0, static_cast<int>(k) - 1)) --k;  // guard rounding at block edges
    if (k >= 1 && z >= std::ldexp(1.0, static_cast<int>(k))) ++k;
    if (blocks.size() <= k) blocks.resize(k + 1);
    blocks[k].add(std::norm(F));
  });
  double best = 0.0, vol = std::pow(s.dz, d - 1);
  for (std::size_t k = 0; k < blocks.size(); ++k)
    best = std::max(best, std::pow(2.0, -0.5 * (d - 1) * static_cast<double>(k)) * std::sqrt(blocks[k].value() * vol));
  return best;
}

template <class T>
double lp_norm(const Grid<T>& f, double p) {
  if (!(p >= 1.0)) throw domain_error("lp_norm requires p >= 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& v : f.data) m = std::max(m, static_cast<double>(std::abs(v)));
    return m;
  }
  NeumaierSum acc;
  for (const auto& v : f.data) acc.add(std::pow(static_cast<double>(std::abs(v)), p));
  return std::pow(acc.value() * f.cell_volume(), 1.0 / p);
}

// ||| g(t, .) ||_{L_p(x)} ||_{L_r(t)} where axis 0 is t.
template <class T>
double mixed_norm(const Grid<T>& g, double r, double p) {
  if (g.rank() < 2) throw domain_error("mixed_norm needs a grid of rank >= 2");
  if (!(p >= 1.0) || !(r >= 1.0)) throw domain_error("mixed_norm requires p, r >= 1");
  std::size_t nt = g.dims[0], slice = g.size() / nt;
  double xvol = g.cell_volume() / g.spacing[0];
  Grid<double> inner({nt}, {g.spacing[0]}, {g.origin[0]});
  for (std::size_t t = 0; t < nt; ++t) {
    if (std::isinf(p)) {
      double m = 0.0;
      for (std::size_t i = 0; i < slice; ++i) m = std::max(m, static_cast<double>(std::abs(g[t * slice + i])));
      inner[t] = m;
    } else {
      NeumaierSum acc;
      for (std::size_t i = 0; i < slice; ++i) acc.add(std::pow(static_cast<double>(std::abs(g[t * slice + i])), p));
      inner[t] = std::pow(acc.value() * xvol, 1.0 / p);
    }
  }
  return lp_norm(inner, r);
}

// ---------------------------------------------------------------- extension

struct SampleRange {
  double lo = 0.0, hi = 0.0;
  std::size_t count = 1;
  double at(std::size_t i) const { return count <= 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1); }
  double step() const { return count <= 1 ? 1.0 : (hi - lo) / static_cast<double>(count - 1); }
};

// E(x) = int_U phi(zeta) exp(2 pi i (<xbar, zeta> + x_d h(zeta))) dzeta on the
// x_d samples of xd and the xbar lattice of spacing 1/(pad n h), cropped to
// |xbar_i| <= x_half_width (0 keeps the full period). Axis 0 of the result is x_d.
inline ComplexGrid extension_operator(const ComplexGrid& phi, const SurfaceChart& chart, SampleRange xd,
                                      double x_half_width = 0.0, std::size_t pad = 1) {
  check_trace_grid(phi);
  if (static_cast<int>(phi.rank()) != chart.m() || phi.dims[0] != chart.gridN)
    throw domain_error("density grid does not match the chart");
  if (pad == 0) pad = 1;
  const int m = chart.m();
  const double h = chart.spacing(), nyq = 0.5 / h;
  double phimax = 0.0;
  for (const auto& v : phi.data) phimax = std::max(phimax, std::abs(v));
  double gmax = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i)
    if (std::abs(phi[i]) > 1e-14 * phimax) gmax = std::max(gmax, chart.gradient_norm(chart.point(i)));
  double xdmax = std::max(std::abs(xd.lo), std::abs(xd.hi));
  if (x_half_width > nyq || xdmax * gmax >= nyq)
    throw domain_error("extension_operator: x range beyond the grid Nyquist limit");

  const std::size_t n = chart.gridN, M = n * pad;
  const double dx = 1.0 / (static_cast<double>(M) * h);
  std::vector<std::size_t> keep;  // centered indices s with xbar = (s - M/2) dx
  for (std::size_t s = 0; s < M; ++s) {
    double x = (static_cast<double>(s) - static_cast<double>(M / 2)) * dx;
    if (x_half_width <= 0.0 || std::abs(x) <= x_half_width + 1e-12 * dx) keep.push_back(s);
  }
  std::vector<std::size_t> dims{xd.count};
  std::vector<double> sp{xd.step()}, org{xd.lo};
  for (int a = 0; a < m; ++a) {
    dims.push_back(keep.size());
    sp.push_back(dx);
    org.push_back((static_cast<double>(keep.front()) - static_cast<double>(M / 2)) * dx);
  }
  ComplexGrid out(dims, sp, org);
  const std::size_t slice_out = m == 1 ? keep.size() : keep.size() * keep.size();
  const double zeta0 = chart.node(0), hm = std::pow(h, m);
  std::vector<double> heights(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) heights[i] = chart.h(chart.point(i));
  std::vector<std::size_t> shape(static_cast<std::size_t>(m), M);

  parallel_for(xd.count, [&](std::size_t t) {
    double xdv = xd.at(t);
    std::vector<cplx> buf(m == 1 ? M : M * M, 0.0);
    for (std::size_t i = 0; i < phi.size(); ++i) {
      std::size_t dst = m == 1 ? i : (i / n) * M + (i % n);
      buf[dst] = phi[i] * std::exp(cplx(0.0, two_pi * xdv * heights[i]));
    }
    fft::transform(buf, shape, fft::Direction::Backward);
    auto wrap = [&](std::size_t s) { return (s + M - M / 2) % M; };  // centered -> FFT bin
    auto xval = [&](std::size_t s) { return (static_cast<double>(s) - static_cast<double>(M / 2)) * dx; };
    for (std::size_t a = 0; a < keep.size(); ++a) {
      if (m == 1) {
        std::size_t s = keep[a];
        out[t * slice_out + a] = hm * std::exp(cplx(0.0, two_pi * xval(s) * zeta0)) * buf[wrap(s)];
      } else {
        for (std::size_t b = 0; b < keep.size(); ++b) {
          std::size_t s0 = keep[a], s1 = keep[b];
          double ph = two_pi * (xval(s0) + xval(s1)) * zeta0;
          out[t * slice_out + a * keep.size() + b] = hm * std::exp(cplx(0.0, ph)) * buf[wrap(s0) * M + wrap(s1)];
        }
      }
    }
  });
  return out;
}

// ---------------------------------------------------------------- dyadic potential

struct DyadicCheck {
  double max_rel_error = 0.0;    // over the requested t range
  double worst_t = 0.0;
  double boundary_deficit = 0.0; // relative shortfall at t = 1 from the k >= 0 truncation
  int max_terms = 0;
};

// phi(t) = t^{-b} (chi(t) - chi(2t)), b = d-1-2 gamma, chi = 1 on [0,1/2] and 0
// past 1, so sum over k of 2^{kb} phi(2^k t) telescopes to t^{-b} chi(t).
inline double dyadic_phi(double t, double b) {
  if (t <= 0.0) return 0.0;
  auto chi = [](double s) { return plateau(s, 0.5, 1.0); };
  double v = chi(t) - chi(2.0 * t);
  return v == 0.0 ? 0.0 : std::pow(t, -b) * v;
}

inline double dyadic_sum(double t, double b, int terms, int* used = nullptr) {
  NeumaierSum acc;
  int k = 0;
  for (; k < terms; ++k) {
    double s = std::ldexp(t, k);
    if (s >= 1.0) break;
    acc.add(std::pow(2.0, k * b) * dyadic_phi(s, b));
  }
  if (used) *used = k;
  return acc.value();
}

inline DyadicCheck dyadic_partition_check(double gamma, int d, double t_lo, double t_hi, std::size_t samples = 200,
                                          int terms = 60) {
  if (!(gamma > 0.0 && gamma < 0.5 * (d - 1))) throw domain_error("dyadic check requires gamma in (0, (d-1)/2)");
  if (!(t_lo > 0.0 && t_hi <= 1.0 && t_lo <= t_hi)) throw domain_error("dyadic check requires a range inside (0, 1]");
  double b = d - 1 - 2.0 * gamma;
  DyadicCheck out;
  for (std::size_t i = 0; i < samples; ++i) {
    double u = samples == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(samples - 1);
    double t = t_lo * std::pow(t_hi / t_lo, u);
    int used = 0;
    double s = dyadic_sum(t, b, terms, &used);
    double target = std::pow(t, -b);
    double e = std::abs(s - target) / target;
    out.max_terms = std::max(out.max_terms, used);
    if (e > out.max_rel_error) {
      out.max_rel_error = e;
      out.worst_t = t;
    }
  }
  out.boundary_deficit = 1.0 - dyadic_sum(1.0, b, terms);
  return out;
}

// ---------------------------------------------------------------- kernel

// Trapezoid quadrature on [-U, U]^m with N + 1 nodes per axis for
// int int f(zeta) g(eta) |zeta - eta|^a, a in (-m, 0]. The inner integral is
// split as int (f(eta+t) - f(eta)) |t|^a dt + f(eta) int_box |t|^a dt; the
// first piece is a Toeplitz sum evaluated by FFT, the second is exact.
class SingularQuadrature {
 public:
  SingularQuadrature(int m, std::size_t N, double U, double a) : m_(m), N_(N), U_(U), a_(a) {
    P_ = N + 1;
    h_ = 2.0 * U / static_cast<double>(N);
    L_ = 1;
    while (L_ < 2 * P_) L_ <<= 1;
    shape_.assign(static_cast<std::size_t>(m), L_);
    std::size_t total = m == 1 ? L_ : L_ * L_;
    std::vector<cplx> w(total, 0.0);
    auto lag = [&](std::size_t idx) { return static_cast<double>(fft::signed_index(idx, L_)); };
    for (std::size_t i = 0; i < total; ++i) {
      double u0 = lag(m == 1 ? i : i / L_), u1 = m == 2 ? lag(i % L_) : 0.0;
      double dist = h_ * std::hypot(u0, u1);
      if (dist > 0.0 && std::abs(u0) <= static_cast<double>(N) && std::abs(u1) <= static_cast<double>(N))
        w[i] = std::pow(dist, a);
    }
    fft::transform(w, shape_, fft::Direction::Forward);
    what_ = std::move(w);
    nodes_ = m == 1 ? P_ : P_ * P_;
    weight_.resize(nodes_);
    for (std::size_t j = 0; j < nodes_; ++j) weight_[j] = trap(m == 1 ? j : j / P_) * (m == 2 ? trap(j % P_) : 1.0);
    std::vector<cplx> ones(nodes_);
    for (std::size_t j = 0; j < nodes_; ++j) ones[j] = weight_[j];
    auto S = convolve(ones);
    corr_.resize(nodes_);
    double hm = std::pow(h_, m);
    for (std::size_t j = 0; j < nodes_; ++j) corr_[j] = box_integral(point(j)) - hm * S[j].real();
  }

  std::size_t nodes() const { return nodes_; }
  ZPoint point(std::size_t j) const {
    if (m_ == 1) return {node(j), 0.0};
    return {node(j / P_), node(j % P_)};
  }

  cplx integrate(const std::vector<cplx>& f, const std::vector<cplx>& g) const {
    std::vector<cplx> cf(nodes_);
    for (std::size_t j = 0; j < nodes_; ++j) cf[j] = weight_[j] * f[j];
    auto Q = convolve(cf);
    double hm = std::pow(h_, m_);
    ComplexNeumaierSum acc;
    for (std::size_t j = 0; j < nodes_; ++j) acc.add(weight_[j] * g[j] * (hm * Q[j] + f[j] * corr_[j]));
    return hm * acc.value();
  }

 private:
  double node(std::size_t i) const { return -U_ + static_cast<double>(i) * h_; }
  double trap(std::size_t i) const { return (i == 0 || i == N_) ? 0.5 : 1.0; }

  std::vector<cplx> convolve(const std::vector<cplx>& v) const {
    std::size_t total = m_ == 1 ? L_ : L_ * L_;
    std::vector<cplx> buf(total, 0.0);
    for (std::size_t j = 0; j < nodes_; ++j) buf[m_ == 1 ? j : (j / P_) * L_ + j % P_] = v[j];
    fft::transform(buf, shape_, fft::Direction::Forward);
    for (std::size_t i = 0; i < total; ++i) buf[i] *= what_[i];
    fft::transform(buf, shape_, fft::Direction::Backward);
    std::vector<cplx> out(nodes_);
    double inv = 1.0 / static_cast<double>(total);
    for (std::size_t j = 0; j < nodes_; ++j) out[j] = buf[m_ == 1 ? j : (j / P_) * L_ + j % P_] * inv;
    return out;
  }

  // int over [0,A] x [0,B] of |t|^a in polar coordinates.
  double quadrant(double A, double B) const {
    if (A <= 0.0 || B <= 0.0) return 0.0;
    double th = std::atan2(B, A), e = a_ + 2.0;
    double s1 = gauss_integrate([&](double t) { return std::pow(1.0 / std::cos(t), e); }, 0.0, th, 32);
    double s2 = gauss_integrate([&](double t) { return std::pow(1.0 / std::sin(t), e); }, th, 0.5 * std::numbers::pi, 32);
    return (std::pow(A, e) * s1 + std::pow(B, e) * s2) / e;
  }

  double box_integral(const ZPoint& z) const {
    if (m_ == 1) {
      double e = a_ + 1.0;
      return (std::pow(U_ + z[0], e) + std::pow(U_ - z[0], e)) / e;
    }
    double l0 = U_ + z[0], r0 = U_ - z[0], l1 = U_ + z[1], r1 = U_ - z[1];
    return quadrant(l0, l1) + quadrant(l0, r1) + quadrant(r0, l1) + quadrant(r0, r1);
  }

  int m_;
  std::size_t N_, P_, L_, nodes_;
  double U_, a_, h_;
  std::vector<std::size_t> shape_;
  std::vector<cplx> what_;
  std::vector<double> weight_, corr_;
};

inline std::shared_ptr<const SingularQuadrature> singular_quadrature(int m, std::size_t N, double U, double a) {
  static std::mutex mu;
  static std::map<std::tuple<int, std::size_t, double, double>, std::shared_ptr<const SingularQuadrature>> cache;
  auto key = std::make_tuple(m, N, U, a);
  {
    std::lock_guard<std::mutex> lk(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto q = std::make_shared<const SingularQuadrature>(m, N, U, a);
  std::lock_guard<std::mutex> lk(mu);
  if (cache.size() > 16) cache.clear();
  return cache.emplace(key, q).first->second;
}

struct KernelOptions {
  std::size_t N = 0;      // fine level nodes per axis minus one; 0 selects the chart grid
  double tolerance = 0.05;
};

struct KernelEval {
  cplx value = 0.0;   // fine level
  cplx coarse = 0.0;  // half resolution
  double rel_diff = 0.0;
  bool converged = true;
};

class quadrature_error : public std::runtime_error {
 public:
  quadrature_error(const std::string& msg, KernelEval e) : std::runtime_error(msg), eval(e) {}
  KernelEval eval;
};

using SpacePoint = std::array<double, 3>;  // (xbar..., x_d); x_d is the last used slot

inline cplx kernel_prefactor(double xd, double yd, unsigned alpha, unsigned beta) {
  cplx c = std::pow(cplx(0.0, two_pi), static_cast<int>(2 * alpha + beta));
  double s = (alpha % 2 ? -1.0 : 1.0) * std::pow(xd, alpha) * std::pow(yd, alpha) * std::pow(xd - yd, beta);
  return c * s;
}

// 2 gamma / |S^{d-2}|: the factor under which |t|^{2 gamma - d + 1} tends to
// the delta function as gamma -> 0.
inline double delta_normalization(double gamma, int d) { return 2.0 * gamma / (d == 2 ? 2.0 : two_pi); }

namespace detail {
inline void kernel_phases(const SurfaceChart& chart, const Window& psi, const SpacePoint& x, const SpacePoint& y,
                          const SingularQuadrature& q, std::vector<cplx>& f, std::vector<cplx>& g) {
  int m = chart.m();
  double xd = x[static_cast<std::size_t>(m)], yd = y[static_cast<std::size_t>(m)];
  f.resize(q.nodes());
  g.resize(q.nodes());
  for (std::size_t j = 0; j < q.nodes(); ++j) {
    ZPoint z = q.point(j);
    double dotx = z[0] * x[0] + (m == 2 ? z[1] * x[1] : 0.0);
    double doty = z[0] * y[0] + (m == 2 ? z[1] * y[1] : 0.0);
    double hz = chart.h(z), w = psi(z);
    f[j] = w * std::exp(cplx(0.0, two_pi * (dotx + xd * hz)));
    g[j] = w * std::exp(cplx(0.0, -two_pi * (doty + yd * hz)));
  }
}
}  // namespace detail

// Un-normalized kernel x_d^alpha y_d^alpha (x_d - y_d)^beta (-1)^alpha
// (2 pi i)^{2 alpha + beta} times the double oscillatory integral with weight
// psi(zeta) psi(eta) |zeta - eta|^{2 gamma - d + 1}, at two resolutions.
inline KernelEval si_kernel_report(const SpacePoint& x, const SpacePoint& y, unsigned alpha, unsigned beta, double gamma,
                                   const SurfaceChart& chart, const Window& psi, KernelOptions opt = {}) {
  check_chart_dimension(chart.d);
  int d = chart.d, m = d - 1;
  if (!(gamma > 0.0 && gamma <= 0.5 * (d - 1))) throw domain_error("kernel requires gamma in (0, (d-1)/2]");
  double xd = x[static_cast<std::size_t>(m)], yd = y[static_cast<std::size_t>(m)];
  cplx pre = kernel_prefactor(xd, yd, alpha, beta);
  KernelEval out;
  if (pre == 0.0) return out;
  std::size_t N = opt.N ? opt.N : chart.gridN;
  if (N % 2) ++N;
  double a = 2.0 * gamma - d + 1.0;
  std::vector<cplx> f, g;
  cplx vals[2];
  for (int level = 0; level < 2; ++level) {
    auto q = singular_quadrature(m, level == 0 ? N / 2 : N, chart.U, a);
    detail::kernel_phases(chart, psi, x, y, *q, f, g);
    vals[level] = pre * q->integrate(f, g);
  }
  out.coarse = vals[0];
  out.value = vals[1];
  double scale = std::abs(out.value);
  out.rel_diff = scale > 0.0 ? std::abs(out.value - out.coarse) / scale : std::abs(out.coarse) > 0.0 ? 1.0 : 0.0;
  out.converged = out.rel_diff <= opt.tolerance;
  return out;
}

inline cplx si_kernel_eval(const SpacePoint& x, const SpacePoint& y, unsigned alpha, unsigned beta, double gamma,
                           const SurfaceChart& chart, const Window& psi, KernelOptions opt = {}) {
  KernelEval e = si_kernel_report(x, y, alpha, beta, gamma, chart, psi, opt);
  if (!e.converged)
    throw quadrature_error("kernel quadrature levels disagree by " + std::to_string(e.rel_diff), e);
  return e.value;
}

// The gamma = 0 kernel: the same prefactor times the single integral
// int exp(2 pi i (<xbar - ybar, zeta> + (x_d - y_d) h(zeta))) |psi(zeta)|^2.
inline cplx si_kernel_gamma_zero(const SpacePoint& x, const SpacePoint& y, unsigned alpha, unsigned beta,
                                 const SurfaceChart& chart, const Window& psi, std::size_t N = 0) {
  check_chart_dimension(chart.d);
  int m = chart.m();
  double xd = x[static_cast<std::size_t>(m)], yd = y[static_cast<std::size_t>(m)];
  cplx pre = kernel_prefactor(xd, yd, alpha, beta);
  if (pre == 0.0) return 0.0;
  N = N ? N : chart.gridN;
  double h = 2.0 * chart.U / static_cast<double>(N);
  std::size_t P = N + 1, total = m == 1 ? P : P * P;
  ComplexNeumaierSum acc;
  for (std::size_t j = 0; j < total; ++j) {
    std::size_t i0 = m == 1 ? j : j / P, i1 = m == 1 ? 0 : j % P;
    ZPoint z{-chart.U + static_cast<double>(i0) * h, m == 2 ? -chart.U + static_cast<double>(i1) * h : 0.0};
    double w = (i0 == 0 || i0 == N ? 0.5 : 1.0) * (m == 2 && (i1 == 0 || i1 == N) ? 0.5 : 1.0);
    double ph = z[0] * (x[0] - y[0]) + (m == 2 ? z[1] * (x[1] - y[1]) : 0.0) + (xd - yd) * chart.h(z);
    double ps = psi(z);
    acc.add(w * ps * ps * std::exp(cplx(0.0, two_pi * ph)));
  }
  return pre * acc.value() * std::pow(h, m);
}

// The envelope (1+|x_d|)^{alpha-gamma} (1+|y_d|)^{alpha-gamma} (1+|x_d-y_d|)^{beta+gamma-(d-1)/2}.
inline double kernel_envelope(double xd, double yd, unsigned alpha, unsigned beta, double gamma, int d) {
  return std::pow(1.0 + std::abs(xd), alpha - gamma) * std::pow(1.0 + std::abs(yd), alpha - gamma) *
         std::pow(1.0 + std::abs(xd - yd), beta + gamma - 0.5 * (d - 1));
}

}  // namespace rlab
