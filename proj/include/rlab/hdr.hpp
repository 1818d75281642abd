// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "rlab/geometry.hpp"

namespace rlab {

// Sufficient test: subcritical restriction, then hull membership, then the
// necessary conditions decide between Fails and NotCovered.
inline Verdict hdr_sufficient(const HDRQuery& q, int d) {
  q.validate();
  Verdict nec = hdr_necessary(q, d);
  Verdict v;
  v.theorem = "hdr-hull";
  v.params = nec.params;
  Verdict sub = restriction_sobolev_verdict(q.k, q.s, ParamTuple{d, q.p});
  if (sub.status == Status::Holds) {
    v.conditions = sub.conditions;
    v.status = Status::Holds;
    v.note = "subcritical: follows from the restriction estimate";
    return v;
  }
  auto g = PlaneGeometry::from(d, q.p, q.ell);
  HullRegion hull = reachable_hull(g);
  bool in = hull.contains(Rational(q.k), q.s);
  auto lb = hull.lower_boundary(Rational(q.k));
  v.add(lb ? "s >= reachable lower boundary " + lb->str() : std::string("k inside the reachable range"), in,
        lb && q.s == *lb);
  if (in) {
    v.status = Status::Holds;
    return v;
  }
  for (const auto& c : nec.conditions) v.conditions.push_back(c);
  v.status = nec.status == Status::Fails ? Status::Fails : Status::NotCovered;
  return v;
}

}  // namespace rlab
