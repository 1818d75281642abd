// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <string>

#include "json.hpp"
#include "rlab/extremizers.hpp"
#include "rlab/fit.hpp"
#include "rlab/steinweiss.hpp"
#include "rlab/verdict.hpp"

namespace rlab::io {

// Insertion-ordered so that identical inputs give byte-identical files.
using json = nlohmann::ordered_json;

// Non-finite doubles have no JSON spelling; they are written as strings.
inline json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

inline json to_json(const Verdict& v) {
  json j;
  j["theorem"] = v.theorem;
  j["status"] = to_string(v.status);
  json params = json::object();
  for (const auto& [k, val] : v.params) params[k] = val;
  j["params"] = params;
  json conds = json::array();
  for (const auto& c : v.conditions) conds.push_back({{"name", c.name}, {"satisfied", c.satisfied}, {"boundary", c.boundary}});
  j["conditions"] = conds;
  if (!v.note.empty()) j["note"] = v.note;
  return j;
}

inline json to_json(const ExponentFit& f) {
  return {{"slope", number(f.slope)},         {"intercept", number(f.intercept)},
          {"rSquared", number(f.r_squared)},  {"predicted", number(f.predicted)},
          {"tolerance", number(f.tolerance)}, {"verdictMatch", f.verdict_match},
          {"logCoefficient", number(f.log_coefficient)}, {"base2", f.base2}};
}

inline json to_json(const ConditionProbe& p) {
  json j{{"condition", p.condition},
         {"family", p.family},
         {"violated", p.violated},
         {"predictedSlope", number(p.predicted_slope)},
         {"fittedSlope", number(p.fitted_slope)},
         {"logCoefficient", number(p.log_coefficient)},
         {"numeric", p.numeric},
         {"diverges", p.diverges},
         {"conclusive", p.conclusive},
         {"consistent", p.consistent}};
  if (!p.note.empty()) j["note"] = p.note;
  return j;
}

inline json to_json(const SharpnessReport& r) {
  json probes = json::array();
  for (const auto& p : r.probes) probes.push_back(to_json(p));
  return {{"theorem", r.theorem}, {"d", r.d}, {"verdict", to_json(r.verdict)}, {"probes", probes}};
}

inline json to_json(const sw::NormEstimate& e) {
  return {{"p", number(e.p)}, {"lower", number(e.lower)}, {"upper", number(e.upper)}, {"iterations", e.iterations}};
}

inline json to_json(const sw::GrowthReport& g) {
  json norms = json::array();
  for (std::size_t i = 0; i < g.radii.size(); ++i) {
    json n = to_json(g.norms[i]);
    n["R"] = g.radii[i];
    norms.push_back(n);
  }
  return {{"a", number(g.a)},
          {"b", number(g.b)},
          {"p", g.p.str()},
          {"growth", sw::to_string(g.growth)},
          {"lastRatio", number(g.last_ratio)},
          {"contraction", number(g.contraction)},
          {"logSlope", number(g.log_slope)},
          {"logRSquared", number(g.log_r_squared)},
          {"powerSlope", number(g.power_slope)},
          {"norms", norms}};
}

inline json to_json(const sw::ScanCell& c) {
  return {{"a", c.ar.str()},
          {"b", c.br.str()},
          {"verdict", to_json(c.verdict)},
          {"growth", to_json(c.growth)},
          {"boundaryDistance", number(c.distance)},
          {"nearBoundary", c.near_boundary},
          {"agrees", c.agrees}};
}

inline json summary(const sw::ScanTable& t) {
  return {{"p", t.p.str()},
          {"cells", t.cells.size()},
          {"agreements", t.agreements},
          {"disagreements", t.disagreements},
          {"disagreementsFarFromBoundary", t.disagreements_far},
          {"agreementRate", number(t.agreement_rate())}};
}

}  // namespace rlab::io
