// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "rlab/fft.hpp"
#include "rlab/parallel.hpp"
#include "rlab/rational.hpp"
#include "rlab/region.hpp"
#include "rlab/verdict.hpp"

namespace rlab::sw {

using cplx = std::complex<double>;

inline double weight(double x, double e) { return std::pow(1.0 + std::abs(x), e); }

// K(x,y) = (1+|x|)^-a (1+|y|)^-a (1+|x-y|)^-b sampled on x_i = -R + i h.
// The matrix is w_i c(i-j) w_j, so products go through a circulant embedding.
class TruncatedKernel {
 public:
  TruncatedKernel(double a, double b, double R, std::size_t gridN) : a_(a), b_(b), R_(R), n_(gridN) {
    if (!(R > 0.0) || gridN < 2) throw domain_error("kernel needs R > 0 and at least two grid points");
    h_ = 2.0 * R / static_cast<double>(gridN - 1);
    w_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) w_[i] = weight(x(i), -a_);
    L_ = 1;
    while (L_ < 2 * n_) L_ <<= 1;
    spec_.assign(L_, cplx(0.0));
    for (std::size_t k = 0; k < n_; ++k) {
      double c = weight(h_ * static_cast<double>(k), -b_);
      spec_[k] = c;
      if (k > 0) spec_[L_ - k] = c;
    }
    fft::transform(spec_, {L_}, fft::Direction::Forward);
  }

  // Grid spacing h fixed; gridN follows from R.
  static TruncatedKernel with_spacing(double a, double b, double R, double h) {
    auto n = static_cast<std::size_t>(std::llround(2.0 * R / h)) + 1;
    return TruncatedKernel(a, b, R, n);
  }

  double a() const { return a_; }
  double b() const { return b_; }
  double R() const { return R_; }
  double h() const { return h_; }
  std::size_t size() const { return n_; }
  double x(std::size_t i) const { return -R_ + h_ * static_cast<double>(i); }

  double entry(std::size_t i, std::size_t j) const {
    double d = h_ * std::abs(static_cast<double>(i) - static_cast<double>(j));
    return w_[i] * w_[j] * weight(d, -b_);
  }

  std::vector<double> dense() const {
    std::vector<double> m(n_ * n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) m[i * n_ + j] = entry(i, j);
    return m;
  }

  // y = K v with the raw matrix entries.
  std::vector<double> apply(const std::vector<double>& v) const {
    std::vector<cplx> buf(L_, cplx(0.0));
    for (std::size_t i = 0; i < n_; ++i) buf[i] = w_[i] * v[i];
    fft::transform(buf, {L_}, fft::Direction::Forward);
    for (std::size_t k = 0; k < L_; ++k) buf[k] *= spec_[k];
    fft::transform(buf, {L_}, fft::Direction::Backward);
    std::vector<double> out(n_);
    double inv = 1.0 / static_cast<double>(L_);
    for (std::size_t i = 0; i < n_; ++i) out[i] = w_[i] * buf[i].real() * inv;
    return out;
  }

  double max_entry() const {
    double m = 0.0;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) m = std::max(m, entry(i, j));
    return m;
  }

  double total_sum() const {
    std::vector<double> ones(n_, 1.0);
    auto y = apply(ones);
    double s = 0.0;
    for (double v : y) s += v;
    return s;
  }

 private:
  double a_, b_, R_, h_ = 0.0;
  std::size_t n_;
  std::size_t L_ = 0;
  std::vector<double> w_;
  std::vector<cplx> spec_;
};

// Operator norm of f -> int K(x,y) f(y) dy from L_p to L_p' on the grid,
// with L_p norms taken as (h sum |f|^p)^(1/p).
struct NormEstimate {
  double p = 2.0;
  double lower = 0.0;
  double upper = 0.0;
  int iterations = 0;
  bool converged = true;
  double value() const { return 0.5 * (lower + upper); }
};

struct NormOptions {
  double tolerance = 1e-8;
  int max_iterations = 400;
  int boyd_iterations = 3000;
};

namespace detail {

// Largest eigenvalue of a symmetric tridiagonal matrix by Sturm bisection.
inline double tridiagonal_top(const std::vector<double>& al, const std::vector<double>& be) {
  std::size_t n = al.size();
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    double r = (i > 0 ? std::abs(be[i - 1]) : 0.0) + (i + 1 < n ? std::abs(be[i]) : 0.0);
    lo = std::min(lo, al[i] - r);
    hi = std::max(hi, al[i] + r);
  }
  auto count_above = [&](double x) {
    int c = 0;
    double q = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      double off = i > 0 ? be[i - 1] * be[i - 1] : 0.0;
      q = al[i] - x - (i > 0 ? off / q : 0.0);
      if (q == 0.0) q = -1e-300;
      if (q > 0.0) ++c;
    }
    return c;
  };
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
    double mid = 0.5 * (lo + hi);
    if (count_above(mid) >= 1)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

// Largest eigenvalue of the symmetric kernel matrix. Lanczos with full
// reorthogonalization started from the positive vector; plain power
// iteration stalls on the nearly flat spectra of convolution-like kernels.
inline NormEstimate spectral_norm(const TruncatedKernel& K, const NormOptions& opt = {}) {
  std::size_t n = K.size();
  std::vector<std::vector<double>> V;
  std::vector<double> al, be;
  std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
  double prev = 0.0, theta = 0.0;
  NormEstimate est;
  est.p = 2.0;
  est.converged = false;
  int limit = static_cast<int>(std::min<std::size_t>(n, static_cast<std::size_t>(opt.max_iterations)));
  for (int j = 0; j < limit; ++j) {
    V.push_back(v);
    auto w = K.apply(v);
    double alpha = 0.0;
    for (std::size_t i = 0; i < n; ++i) alpha += v[i] * w[i];
    al.push_back(alpha);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : V) {
        double dot = 0.0;
        for (std::size_t i = 0; i < n; ++i) dot += q[i] * w[i];
        for (std::size_t i = 0; i < n; ++i) w[i] -= dot * q[i];
      }
    double beta = 0.0;
    for (double t : w) beta += t * t;
    beta = std::sqrt(beta);
    theta = detail::tridiagonal_top(al, be);
    est.iterations = j + 1;
    bool exhausted = beta <= 1e-14 * std::abs(theta) || j + 1 == static_cast<int>(n);
    if ((j > 2 && std::abs(theta - prev) <= opt.tolerance * 1e-2 * std::abs(theta)) || exhausted) {
      est.converged = true;
      break;
    }
    prev = theta;
    be.push_back(beta);
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / beta;
  }
  if (!est.converged) throw numeric_error("spectral norm iteration did not converge");
  est.lower = est.upper = K.h() * theta;
  return est;
}

// Boyd's fixed point iteration for the p -> q norm of a nonnegative matrix.
// Every iterate gives a valid lower bound.
inline double boyd_lower(const TruncatedKernel& K, double p, double q, int iterations, double tol, int* used) {
  std::size_t n = K.size();
  double pd = p / (p - 1.0);
  std::vector<double> x(n, 1.0);
  auto normalize = [&](std::vector<double>& v) {
    double s = 0.0;
    for (double t : v) s += std::pow(t, p);
    s = std::pow(s, 1.0 / p);
    for (double& t : v) t /= s;
  };
  normalize(x);
  double best = 0.0, last = 0.0;
  int it = 0;
  for (; it < iterations; ++it) {
    auto y = K.apply(x);
    double nq = 0.0;
    for (double t : y) nq += std::pow(std::max(t, 0.0), q);
    nq = std::pow(nq, 1.0 / q);
    best = std::max(best, nq);
    if (it > 0 && std::abs(nq - last) <= tol * nq) break;
    last = nq;
    for (double& t : y) t = std::pow(std::max(t, 0.0), q - 1.0);
    auto z = K.apply(y);
    for (std::size_t i = 0; i < n; ++i) x[i] = std::pow(std::max(z[i], 0.0), pd - 1.0);
    normalize(x);
  }
  if (used) *used = it + 1;
  return best;
}

// p = 1 and p = inf are exact; 1 < p < 2 and 2 < p < inf carry a Boyd lower
// bound and a Riesz-Thorin upper bound interpolated from the exact endpoints.
inline NormEstimate operator_norm_estimate(const TruncatedKernel& K, const Exponent& p, const NormOptions& opt = {}) {
  if (p.reciprocal() > Rational(1)) throw domain_error("p must be at least 1");
  double h = K.h();
  NormEstimate est;
  est.p = p.to_double();
  Rational ip = p.reciprocal();
  if (ip == Rational(1)) {
    est.lower = est.upper = K.max_entry();
    return est;
  }
  if (ip == Rational(0)) {
    est.lower = est.upper = h * h * K.total_sum();
    return est;
  }
  auto two = spectral_norm(K, opt);
  if (ip == Rational(1, 2)) return two;
  double pv = p.to_double(), q = pv / (pv - 1.0);
  double scale = std::pow(h, 2.0 / q);
  est.lower = scale * boyd_lower(K, pv, q, opt.boyd_iterations, 1e-10, &est.iterations);
  if (ip > Rational(1, 2)) {
    double theta = 2.0 / pv - 1.0;
    est.upper = std::pow(K.max_entry(), theta) * std::pow(two.upper, 1.0 - theta);
  } else {
    double theta = 1.0 - 2.0 / pv;
    est.upper = std::pow(h * h * K.total_sum(), theta) * std::pow(two.upper, 1.0 - theta);
  }
  est.upper = std::max(est.upper, est.lower);
  return est;
}

// Point mass at z: sup_x (1+|z-x|)^-b (1+|x|)^-a on the grid against
// max((1+|z|)^-b, (1+|z|)^-a).
struct DeltaProbe {
  double z = 0.0;
  double numeric = 0.0;
  double predicted = 0.0;
  double ratio() const { return numeric / predicted; }
};

inline DeltaProbe delta_probe(double a, double b, double z, double R, std::size_t gridN) {
  DeltaProbe d;
  d.z = z;
  double h = 2.0 * R / static_cast<double>(gridN - 1);
  for (std::size_t i = 0; i < gridN; ++i) {
    double x = -R + h * static_cast<double>(i);
    d.numeric = std::max(d.numeric, weight(z - x, -b) * weight(x, -a));
  }
  d.predicted = std::max(weight(z, -b), weight(z, -a));
  return d;
}

// Schur test with rho = (1+|x|)^c: max_y int K(x,y) rho(x) dx / rho(y).
// R-stable when the increments over R/4, R/2, R shrink geometrically.
struct SchurCertificate {
  double a = 0, b = 0, c = 0, R = 0;
  double lhs_max = 0.0;
  std::array<double, 3> ladder{};
  bool precondition = false;  // c < a + b - 1
  bool ok = false;
};

namespace detail {
inline double schur_ratio(double a, double b, double c, double R, std::size_t n) {
  TruncatedKernel K(a, b, R, n);
  std::vector<double> rho(n);
  for (std::size_t i = 0; i < n; ++i) rho[i] = weight(K.x(i), c);
  auto y = K.apply(rho);
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, K.h() * y[i] / rho[i]);
  return m;
}
}  // namespace detail

inline SchurCertificate schur_certificate(double a, double b, double c, double R, std::size_t gridN) {
  SchurCertificate s{a, b, c, R};
  s.precondition = c < a + b - 1.0;
  double h = 2.0 * R / static_cast<double>(gridN - 1);
  for (int j = 0; j < 3; ++j) {
    double Rj = R / static_cast<double>(1 << (2 - j));
    auto n = static_cast<std::size_t>(std::llround(2.0 * Rj / h)) + 1;
    s.ladder[static_cast<std::size_t>(j)] = detail::schur_ratio(a, b, c, Rj, n);
  }
  s.lhs_max = s.ladder[2];
  double d1 = s.ladder[1] - s.ladder[0], d2 = s.ladder[2] - s.ladder[1];
  s.ok = d2 <= 1e-3 * s.lhs_max || d2 < 0.97 * d1;
  return s;
}

// Integral of K(x,y) rho(x) over {|x| >= 2|y|}, the part of {|x| < 2|y|}
// closer to 0, and the part closer to y, each against its closed form
// majorant with explicit constants.
struct ThreeRegionCheck {
  std::array<double, 3> worst_ratio{};  // max over y of numeric / majorant
  bool ok = true;
};

namespace detail {
inline double tail_integral(double Y, double e) {
  if (e >= -1.0) return std::numeric_limits<double>::infinity();
  return 2.0 * std::pow(1.0 + Y, e + 1.0) / (-e - 1.0);
}
inline double ball_integral(double Y, double e) {
  if (std::abs(e + 1.0) < 1e-14) return 2.0 * std::log1p(Y);
  return 2.0 * (std::pow(1.0 + Y, e + 1.0) - 1.0) / (e + 1.0);
}
}  // namespace detail

inline ThreeRegionCheck three_region_check(double a, double b, double c, double R, std::size_t gridN) {
  ThreeRegionCheck out;
  double h = 2.0 * R / static_cast<double>(gridN - 1);
  for (std::size_t jy = 0; jy < gridN; ++jy) {
    double y = -R + h * static_cast<double>(jy), ay = std::abs(y);
    std::array<double, 3> num{};
    for (std::size_t ix = 0; ix < gridN; ++ix) {
      double x = -R + h * static_cast<double>(ix), ax = std::abs(x), dx = std::abs(x - y);
      double f = h * weight(x, c - a) * weight(y, -a) * weight(dx, -b);
      if (ax >= 2.0 * ay)
        num[0] += f;
      else if (ax <= dx)
        num[1] += f;
      else
        num[2] += f;
    }
    double wy = weight(y, -a);
    std::array<double, 3> maj{
        std::pow(2.0, std::abs(b)) * detail::tail_integral(2.0 * ay, c - a - b) * wy,
        std::pow(3.0, std::abs(b)) * weight(y, -b) * detail::ball_integral(2.0 * ay, c - a) * wy,
        std::pow(2.0, std::abs(c - a)) * weight(y, c - a) * detail::ball_integral(2.0 * ay, -b) * wy};
    for (std::size_t r = 0; r < 3; ++r) {
      if (num[r] == 0.0) continue;
      double q = num[r] / maj[r];
      out.worst_ratio[r] = std::max(out.worst_ratio[r], q);
    }
  }
  for (double q : out.worst_ratio) out.ok = out.ok && q <= 1.1;
  return out;
}

// Growth of the truncated norm along a dyadic R ladder.
enum class Growth { Stable, LogDivergent, PowerDivergent };

inline std::string to_string(Growth g) {
  switch (g) {
    case Growth::Stable: return "stable";
    case Growth::LogDivergent: return "log-divergent";
    case Growth::PowerDivergent: return "power-divergent";
  }
  return "?";
}

struct LadderOptions {
  std::vector<double> radii{8, 16, 32, 64, 128};
  double h = 0.5;
  double stable_ratio = 1.05;
  double contraction = 0.9;
  NormOptions norm{};
};

struct GrowthReport {
  double a = 0, b = 0;
  Exponent p;
  std::vector<double> radii;
  std::vector<NormEstimate> norms;
  Growth growth = Growth::Stable;
  double last_ratio = 1.0;
  double contraction = 1.0;    // last increment over the one before
  double log_slope = 0.0;      // N against log R
  double log_r_squared = 0.0;
  double power_slope = 0.0;    // log N against log R over the last three radii
};

namespace detail {
inline std::pair<double, double> linear_fit(const std::vector<double>& x, const std::vector<double>& y,
                                            double* r2) {
  double n = static_cast<double>(x.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx), icpt = (sy - slope * sx) / n;
  double mean = sy / n, tot = 0, res = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    tot += (y[i] - mean) * (y[i] - mean);
    double e = y[i] - icpt - slope * x[i];
    res += e * e;
  }
  if (r2) *r2 = tot > 0 ? 1.0 - res / tot : 1.0;
  return {slope, icpt};
}
}  // namespace detail

// Stable when the last dyadic ratio is below the threshold or the increments
// contract geometrically, as for N_inf - C R^-delta. Divergent
// ladders are power-divergent when the increments grow by more than 2.5 from
// first to last, else log-divergent.
inline GrowthReport classify_growth(double a, double b, const Exponent& p, const LadderOptions& opt = {}) {
  if (opt.radii.size() < 3) throw domain_error("growth ladder needs at least three radii");
  GrowthReport g;
  g.a = a;
  g.b = b;
  g.p = p;
  g.radii = opt.radii;
  std::vector<double> lr, val, llog;
  for (double R : opt.radii) {
    auto K = TruncatedKernel::with_spacing(a, b, R, opt.h);
    auto est = operator_norm_estimate(K, p, opt.norm);
    g.norms.push_back(est);
    lr.push_back(std::log(R));
    val.push_back(est.lower);
    llog.push_back(std::log(est.lower));
  }
  std::size_t m = val.size();
  g.last_ratio = val[m - 1] / val[m - 2];
  g.log_slope = detail::linear_fit(lr, val, &g.log_r_squared).first;
  std::vector<double> tx(lr.end() - 3, lr.end()), ty(llog.end() - 3, llog.end());
  g.power_slope = detail::linear_fit(tx, ty, nullptr).first;
  double d_prev = val[m - 2] - val[m - 3], d_end = val[m - 1] - val[m - 2];
  g.contraction = d_prev > 0.0 ? d_end / d_prev : 0.0;
  if (g.last_ratio < opt.stable_ratio || g.contraction < opt.contraction) {
    g.growth = Growth::Stable;
  } else {
    double d_first = val[1] - val[0], d_last = val[m - 1] - val[m - 2];
    g.growth = d_last > 2.5 * d_first ? Growth::PowerDivergent : Growth::LogDivergent;
  }
  return g;
}

// Distance from (a,b) to the boundary pieces {a + b = c1, b <= 0} and
// {2a + b = 2 - 2/p, 0 <= b <= 1}, with c1 = 0 at p = 1 and 1 - 1/p otherwise.
inline double boundary_distance(double a, double b, const Exponent& p) {
  double ip = p.reciprocal().to_double();
  double c1 = ip == 1.0 ? 0.0 : 1.0 - ip, c2 = 2.0 - 2.0 * ip;
  auto seg = [&](double ax, double ay, double bx, double by) {
    double vx = bx - ax, vy = by - ay;
    double t = std::clamp(((a - ax) * vx + (b - ay) * vy) / (vx * vx + vy * vy), 0.0, 1.0);
    return std::hypot(a - ax - t * vx, b - ay - t * vy);
  };
  // a + b = c1 for b in [-10, 0]; 2a + b = c2 for b in [0, 1].
  double d1 = seg(c1 + 10.0, -10.0, c1, 0.0);
  double d2 = seg(c2 / 2.0, 0.0, (c2 - 1.0) / 2.0, 1.0);
  double d = std::min(d1, d2);
  // d1 and d2 cover the a < 0 side as well; cells there are outside the scan.
  return d;
}

struct ScanCell {
  double a = 0, b = 0;
  Rational ar, br;
  Verdict verdict;
  GrowthReport growth;
  double distance = 0.0;
  bool near_boundary = false;
  bool agrees = false;
};

struct ScanTable {
  Exponent p;
  std::vector<ScanCell> cells;
  std::size_t agreements = 0;
  std::size_t disagreements = 0;
  std::size_t disagreements_far = 0;  // disagreements farther than the margin from a boundary
  double agreement_rate() const {
    return cells.empty() ? 0.0 : static_cast<double>(agreements) / static_cast<double>(cells.size());
  }
};

struct ScanOptions {
  std::size_t a_count = 20, b_count = 20;
  Rational a_lo{0}, a_hi{2}, b_lo{-1}, b_hi{2};
  double margin = 0.1;
  LadderOptions ladder{};
};

// A verdict of Holds corresponds to a stable ladder, Fails to divergence.
inline bool agrees(const Verdict& v, Growth g) {
  if (v.status == Status::Holds) return g == Growth::Stable;
  if (v.status == Status::Fails) return g != Growth::Stable;
  return false;
}

inline ScanCell scan_cell(const Rational& a, const Rational& b, const Exponent& p, const ScanOptions& opt) {
  ScanCell c;
  c.ar = a;
  c.br = b;
  c.a = a.to_double();
  c.b = b.to_double();
  c.verdict = steinweiss_verdict(a, b, p);
  c.growth = classify_growth(c.a, c.b, p, opt.ladder);
  c.distance = boundary_distance(c.a, c.b, p);
  c.near_boundary = c.distance <= opt.margin;
  c.agrees = agrees(c.verdict, c.growth.growth);
  return c;
}

// Linearly spaced grid including both endpoints, with exact rational nodes.
inline std::vector<Rational> linspace(const Rational& lo, const Rational& hi, std::size_t n) {
  std::vector<Rational> out;
  if (n == 1) return {lo};
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(lo + (hi - lo) * Rational(static_cast<std::int64_t>(i), static_cast<std::int64_t>(n - 1)));
  return out;
}

inline ScanTable dichotomy_scan(const Exponent& p, const ScanOptions& opt = {}) {
  auto as = linspace(opt.a_lo, opt.a_hi, opt.a_count);
  auto bs = linspace(opt.b_lo, opt.b_hi, opt.b_count);
  ScanTable t;
  t.p = p;
  t.cells.resize(as.size() * bs.size());
  parallel_for(t.cells.size(), [&](std::size_t idx) {
    t.cells[idx] = scan_cell(as[idx / bs.size()], bs[idx % bs.size()], p, opt);
  });
  for (const auto& c : t.cells) {
    if (c.agrees) {
      ++t.agreements;
    } else {
      ++t.disagreements;
      if (!c.near_boundary) ++t.disagreements_far;
    }
  }
  return t;
}

}  // namespace rlab::sw
