// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>

#include "rlab/geometry.hpp"

namespace rlab::svg {

namespace detail {
inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}
}  // namespace detail

// Static picture of the (k, s) plane: the friendly region, the reachable
// hull with its generators, the anchors K, L, P, Q and an optional query.
inline std::string region_diagram(const PlaneGeometry& g, const HullRegion& hull,
                                  std::optional<PlanarPoint> query = std::nullopt) {
  const double W = 480, H = 480, pad = 40;
  double kmax = std::max({1.0, g.sigma.to_double(), g.kappa.to_double()}) + 1.0;
  double smin = -std::max(1.0, g.ell.to_double()) - 0.5, smax = std::max(2.0, kmax + 1.0);
  auto X = [&](double k) { return pad + (k / kmax) * (W - 2 * pad); };
  auto Y = [&](double s) { return H - pad - (s - smin) / (smax - smin) * (H - 2 * pad); };
  auto pt = [&](double k, double s) { return detail::fmt(X(k)) + "," + detail::fmt(Y(s)); };
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
     << " " << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<line x1=\"" << detail::fmt(X(0)) << "\" y1=\"" << detail::fmt(Y(smin)) << "\" x2=\"" << detail::fmt(X(0))
     << "\" y2=\"" << detail::fmt(Y(smax)) << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << detail::fmt(X(0)) << "\" y1=\"" << detail::fmt(Y(0)) << "\" x2=\"" << detail::fmt(X(kmax))
     << "\" y2=\"" << detail::fmt(Y(0)) << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << detail::fmt(X(kmax) - 12) << "\" y=\"" << detail::fmt(Y(0) + 16) << "\">k</text>\n";
  os << "<text x=\"" << detail::fmt(X(0) + 6) << "\" y=\"" << detail::fmt(Y(smax) + 12) << "\">s</text>\n";

  // Friendly region: 0 < k < sigma, s >= max(0, k - 1, 2k - kappa).
  double kr = std::min(g.sigma.to_double(), kmax);
  if (kr > 0) {
    std::string poly;
    const int steps = 64;
    for (int i = 0; i <= steps; ++i) {
      double k = kr * i / steps;
      double s = std::max({0.0, k - 1.0, 2 * k - g.kappa.to_double()});
      poly += pt(k, std::min(s, smax)) + " ";
    }
    poly += pt(kr, smax) + " " + pt(0, smax);
    os << "<polygon points=\"" << poly << "\" fill=\"#dde8f6\" stroke=\"#6c8ebf\"/>\n";
  }

  // Boundary lines s = slope k + icpt, clipped to the view; each carries its equation.
  auto line = [&](double slope, double icpt, const std::string& eq, const char* color) {
    double s0 = icpt, s1 = slope * kmax + icpt;
    os << "<line class=\"boundary\" x1=\"" << detail::fmt(X(0)) << "\" y1=\"" << detail::fmt(Y(s0)) << "\" x2=\""
       << detail::fmt(X(kmax)) << "\" y2=\"" << detail::fmt(Y(s1)) << "\" stroke=\"" << color
       << "\" stroke-dasharray=\"4 3\"><title>" << eq << "</title></line>\n";
  };
  line(1.0, 0.0, "s = k", "#888888");
  line(1.0, -1.0, "s = k - 1", "#888888");
  line(2.0, -g.kappa.to_double(), "s = 2k - " + g.kappa.str(), "#6c8ebf");
  if (g.sigma > Rational(0))
    os << "<line class=\"boundary\" x1=\"" << detail::fmt(X(g.sigma.to_double())) << "\" y1=\"" << detail::fmt(Y(smin))
       << "\" x2=\"" << detail::fmt(X(g.sigma.to_double())) << "\" y2=\"" << detail::fmt(Y(smax))
       << "\" stroke=\"#6c8ebf\" stroke-dasharray=\"4 3\"><title>k = " << g.sigma.str() << "</title></line>\n";
  if (g.kappa > Rational(0)) {
    Rational slope = Rational(1) + g.ell / g.kappa;
    line(slope.to_double(), -g.ell.to_double(),
         "KL: s = " + slope.str() + " k - " + g.ell.str() + " through " + g.L().str() + " and " + g.K().str(),
         "#2e7d32");
  } else {
    os << "<text class=\"diagnostic\" x=\"" << pad << "\" y=\"38\" font-size=\"13\" fill=\"#b00020\">"
       << (hull.diagnostic().empty() ? std::string("kappa_p <= 0: the region is empty") : hull.diagnostic())
       << "</text>\n";
  }

  const auto& chain = hull.lower_chain();
  if (!chain.empty()) {
    std::string poly;
    for (const auto& c : chain) poly += pt(c.k.to_double(), c.s.to_double()) + " ";
    poly += pt(chain.back().k.to_double(), smax) + " " + pt(chain.front().k.to_double(), smax);
    os << "<polygon points=\"" << poly << "\" fill=\"#f6e3c8\" fill-opacity=\"0.8\" stroke=\"#c07a1c\"/>\n";
  }
  for (const auto& gp : hull.generators())
    os << "<circle cx=\"" << detail::fmt(X(gp.pt.k.to_double())) << "\" cy=\"" << detail::fmt(Y(gp.pt.s.to_double()))
       << "\" r=\"2.5\" fill=\"#c07a1c\"><title>" << gp.label << " " << gp.pt.str() << "</title></circle>\n";

  auto anchor = [&](const PlanarPoint& a, const char* name) {
    os << "<circle cx=\"" << detail::fmt(X(a.k.to_double())) << "\" cy=\"" << detail::fmt(Y(a.s.to_double()))
       << "\" r=\"3.5\" fill=\"black\"/>\n";
    os << "<text x=\"" << detail::fmt(X(a.k.to_double()) + 5) << "\" y=\"" << detail::fmt(Y(a.s.to_double()) - 5)
       << "\" font-size=\"12\">" << name << "</text>\n";
  };
  if (g.kappa > Rational(0)) {
    anchor(g.K(), "K");
    anchor(g.L(), "L");
    if (g.kappa >= Rational(1)) {
      anchor(g.P(), "P");
      anchor(g.Q(), "Q");
    }
  }
  if (query)
    os << "<circle cx=\"" << detail::fmt(X(query->k.to_double())) << "\" cy=\"" << detail::fmt(Y(query->s.to_double()))
       << "\" r=\"5\" fill=\"none\" stroke=\"#b00020\" stroke-width=\"2\"><title>query " << query->str()
       << "</title></circle>\n";
  os << "<text x=\"" << pad << "\" y=\"20\" font-size=\"13\">sigma_p = " << g.sigma.str() << ", kappa_p = "
     << g.kappa.str() << ", ell = " << g.ell.str() << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace rlab::svg
