// SPDX-License-Identifier: Apache-2.0
// Command-line front end: exact verdicts, family exponent fits and the
// weighted convolution scans. Exit codes: 0 success, 1 a property check
// failed, 2 usage error or invalid parameters.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rlab/diagram.hpp"
#include "rlab/extremizers.hpp"
#include "rlab/hdr.hpp"
#include "rlab/json_io.hpp"
#include "rlab/seq.hpp"
#include "rlab/steinweiss.hpp"

namespace fs = std::filesystem;
using rlab::io::json;

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string out = "restriction_lab_out";
  std::uint64_t seed = 1;
  unsigned threads = 0;

  int d = 3;
  std::string p = "1";
  int k = 1;
  std::string s = "0";
  std::string ell = "0";
  int alpha = 0;
  int beta = 0;
  std::string gamma;
  std::string r;

  std::string family = "knapp";
  int vanishing = -1;
  std::vector<double> n_values;
  std::size_t grid = 0;
  std::size_t pad = 0;

  std::string a = "0";
  std::string b = "1";
  bool scan = false;
  std::size_t na = 20, nb = 20;
  double h = 0.5;
  std::vector<double> radii{8, 16, 32, 64, 128};
  double margin = 0.1;
  std::string c;

  std::string theorem = "restriction-sobolev";
  int m = 10;
  int instances = 1000;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

rlab::Rational rational(const std::string& text, const char* what) {
  try {
    return rlab::Rational::parse(text);
  } catch (const std::exception& e) {
    throw UsageError(std::string("cannot parse ") + what + " = '" + text + "' as a rational");
  }
}

rlab::Exponent exponent(const std::string& text) {
  try {
    return rlab::Exponent::parse(text);
  } catch (const std::exception&) {
    throw UsageError("cannot parse p = '" + text + "' as a rational or inf");
  }
}

rlab::Rational finite_p(const std::string& text) {
  auto e = exponent(text);
  if (e.infinite) throw rlab::domain_error("p = inf is only accepted by the strichartz and stein-weiss statements");
  return e.value;
}

void write_file(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json config_block(const RunConfig& cfg, const std::string& command) {
  return {{"command", command}, {"seed", cfg.seed}};
}

std::string slug(std::string s) {
  for (char& ch : s)
    if (ch == '/') ch = '_';
  return s;
}

// ------------------------------------------------------------------ region

int cmd_region(const RunConfig& cfg) {
  rlab::Rational p = finite_p(cfg.p), s = rational(cfg.s, "s"), ell = rational(cfg.ell, "ell");
  rlab::ParamTuple pt{cfg.d, p};
  auto ex = rlab::exponents(pt);
  rlab::HDRQuery q{cfg.k, s, ell, p};
  q.validate();
  json verdicts = json::array();
  verdicts.push_back(rlab::io::to_json(rlab::restriction_sobolev_verdict(cfg.k, s, pt)));
  verdicts.push_back(rlab::io::to_json(rlab::vanishing_restriction_verdict(cfg.k, s, pt)));
  verdicts.push_back(rlab::io::to_json(rlab::stability_verdict(cfg.k, pt)));
  verdicts.push_back(rlab::io::to_json(rlab::hdr_necessary(q, cfg.d)));
  auto suff = rlab::hdr_sufficient(q, cfg.d);
  verdicts.push_back(rlab::io::to_json(suff));
  if (ex.kappa.den() == 1 && p > rlab::Rational(1) && ex.kappa > rlab::Rational(0))
    verdicts.push_back(rlab::io::to_json(rlab::hdr_closed_form(q, cfg.d)));
  if (!cfg.gamma.empty()) {
    rlab::SIQuery si{cfg.alpha, cfg.beta, rational(cfg.gamma, "gamma"), p};
    verdicts.push_back(rlab::io::to_json(rlab::si_verdict(si, cfg.d)));
    if (!cfg.r.empty()) verdicts.push_back(rlab::io::to_json(rlab::strichartz_verdict(si, exponent(cfg.r), p, cfg.d)));
  }
  json doc;
  doc["config"] = config_block(cfg, "region");
  doc["d"] = cfg.d;
  doc["p"] = p.str();
  doc["sigma_p"] = ex.sigma.str();
  doc["kappa_p"] = ex.kappa.str();
  doc["hdr"] = rlab::to_string(suff.status);
  doc["verdicts"] = verdicts;

  auto g = rlab::PlaneGeometry::from(cfg.d, p, ell);
  auto hull = rlab::reachable_hull(g);
  json gens = json::array();
  for (const auto& gp : hull.generators()) gens.push_back({{"label", gp.label}, {"k", gp.pt.k.str()}, {"s", gp.pt.s.str()}});
  doc["hullGenerators"] = gens;
  fs::path out(cfg.out);
  write_file(out / "region_verdicts.json", dump(doc));
  write_file(out / "region.svg", rlab::svg::region_diagram(g, hull, rlab::PlanarPoint{rlab::Rational(cfg.k), s}));
  std::cout << dump(doc);
  return kOk;
}

// ------------------------------------------------------------------ verify

rlab::FamilyKind family_kind(const std::string& name) {
  if (name == "knapp") return rlab::FamilyKind::Knapp;
  if (name == "shift") return rlab::FamilyKind::Shift;
  if (name == "surface") return rlab::FamilyKind::SurfaceMeasure;
  if (name == "shifted-knapp") return rlab::FamilyKind::ShiftedKnapp;
  throw UsageError("unknown family '" + name + "' (knapp, shift, surface, shifted-knapp)");
}

int cmd_verify(const RunConfig& cfg) {
  rlab::FamilySpec spec;
  spec.kind = family_kind(cfg.family);
  spec.d = cfg.d;
  spec.k = cfg.k;
  spec.s = rational(cfg.s, "s");
  spec.ell = rational(cfg.ell, "ell");
  spec.p = finite_p(cfg.p);
  spec.gridN = cfg.grid;
  spec.pad = cfg.pad;
  if (spec.kind == rlab::FamilyKind::Knapp)
    spec.vanishing = static_cast<unsigned>(cfg.vanishing >= 0 ? cfg.vanishing : cfg.k);
  else
    spec.vanishing = static_cast<unsigned>(std::max(cfg.vanishing, 0));
  if (spec.kind != rlab::FamilyKind::ShiftedKnapp && spec.d != 2 && spec.d != 3)
    throw rlab::domain_error("family numerics are available for d = 2 and d = 3");
  if (spec.kind == rlab::FamilyKind::Shift && spec.d == 2 && spec.gridN == 0) spec.gridN = 1024;
  spec.n_values = cfg.n_values.empty() ? rlab::default_n_values(spec) : cfg.n_values;

  auto pred = rlab::predicted_slopes(spec);
  auto fam = rlab::make_family(spec);
  auto lhs = rlab::lhs_series(fam);
  auto rhs = rlab::rhs_series(fam);

  json doc;
  doc["config"] = config_block(cfg, "verify");
  doc["family"] = cfg.family;
  doc["d"] = spec.d;
  doc["k"] = spec.k;
  doc["s"] = spec.s.str();
  doc["ell"] = spec.ell.str();
  doc["p"] = spec.p.str();
  doc["vanishing"] = spec.vanishing;
  if (!fam.note.empty()) doc["note"] = fam.note;

  bool ok = true;
  json checks = json::array();
  auto check = [&](const std::string& name, bool pass, double value, double target) {
    checks.push_back({{"name", name}, {"pass", pass}, {"value", rlab::io::number(value)}, {"target", rlab::io::number(target)}});
    ok = ok && pass;
  };
  switch (spec.kind) {
    case rlab::FamilyKind::Knapp: {
      auto fl = rlab::fit_exponent(lhs, pred.lhs, 0.05);
      auto fr = rlab::fit_exponent(rhs, pred.rhs, 1e-9);
      doc["lhsFit"] = rlab::io::to_json(fl);
      doc["rhsFit"] = rlab::io::to_json(fr);
      check("lhs slope within 0.05", std::abs(fl.slope - pred.lhs) <= 0.05, fl.slope, pred.lhs);
      check("rhs slope exact", std::abs(fr.slope - pred.rhs) <= 1e-9, fr.slope, pred.rhs);
      break;
    }
    case rlab::FamilyKind::Shift: {
      auto fl = rlab::fit_exponent(lhs, pred.lhs, 0.1);
      doc["lhsFit"] = rlab::io::to_json(fl);
      check("lhs slope at least k - s - 0.1", fl.slope >= pred.lhs - 0.1, fl.slope, pred.lhs);
      if (spec.ell == rlab::Rational(0)) {
        double var = 0.0;
        for (const auto& pt : rhs) var = std::max(var, std::abs(pt.value - rhs.front().value) / rhs.front().value);
        check("rhs constant to 1e-12", var <= 1e-12, var, 0.0);
      } else {
        auto fr = rlab::fit_exponent(rhs, pred.rhs, 0.1);
        doc["rhsFit"] = rlab::io::to_json(fr);
        check("rhs slope at most ell + 0.1", fr.slope <= pred.rhs + 0.1, fr.slope, pred.rhs);
      }
      break;
    }
    case rlab::FamilyKind::SurfaceMeasure: {
      auto fl = rlab::fit_exponent(lhs, pred.lhs, 0.1, true);
      auto fr = rlab::fit_exponent(rhs, pred.rhs, 0.1, true);
      doc["lhsFit"] = rlab::io::to_json(fl);
      doc["rhsFit"] = rlab::io::to_json(fr);
      check("lhs slope in 2^n within 0.1", std::abs(fl.slope - pred.lhs) <= 0.1, fl.slope, pred.lhs);
      check("rhs slope in 2^n within 0.1", std::abs(fr.slope - pred.rhs) <= 0.1, fr.slope, pred.rhs);
      break;
    }
    case rlab::FamilyKind::ShiftedKnapp: {
      auto fr = rlab::fit_exponent_with_log(rlab::ratio_series(lhs, rhs), pred.lhs - pred.rhs, 0.1);
      doc["ratioFit"] = rlab::io::to_json(fr);
      check("ratio slope within 0.1", std::abs(fr.slope - (pred.lhs - pred.rhs)) <= 0.1, fr.slope, pred.lhs - pred.rhs);
      break;
    }
  }
  doc["checks"] = checks;
  doc["pass"] = ok;

  std::ostringstream csv;
  csv << "familyKind,n,lhs,rhs,predictedSlopeLHS,predictedSlopeRHS\n";
  for (std::size_t i = 0; i < lhs.size(); ++i)
    csv << cfg.family << ',' << fmt(lhs[i].n) << ',' << fmt(lhs[i].value) << ',' << fmt(rhs[i].value) << ','
        << fmt(pred.lhs) << ',' << fmt(pred.rhs) << '\n';
  fs::path out(cfg.out);
  write_file(out / ("verify_" + cfg.family + ".csv"), csv.str());
  write_file(out / ("verify_" + cfg.family + ".json"), dump(doc));
  std::cout << dump(doc);
  return ok ? kOk : kCheckFailed;
}

// -------------------------------------------------------------- steinweiss

rlab::sw::LadderOptions ladder(const RunConfig& cfg) {
  rlab::sw::LadderOptions lo;
  lo.radii = cfg.radii;
  lo.h = cfg.h;
  if (lo.radii.size() < 3) throw UsageError("--radii needs at least three values");
  if (!(lo.h > 0.0)) throw UsageError("--spacing must be positive");
  return lo;
}

int cmd_steinweiss(const RunConfig& cfg) {
  auto p = exponent(cfg.p);
  fs::path out(cfg.out);
  if (cfg.scan) {
    rlab::sw::ScanOptions so;
    so.a_count = cfg.na;
    so.b_count = cfg.nb;
    so.margin = cfg.margin;
    so.ladder = ladder(cfg);
    auto table = rlab::sw::dichotomy_scan(p, so);
    std::ostringstream csv;
    csv << "p,a,b,verdict,growth,lastRatio,contraction,boundaryDistance,nearBoundary,agrees";
    for (double R : so.ladder.radii) csv << ",lower_R" << fmt(R) << ",upper_R" << fmt(R);
    csv << '\n';
    for (const auto& c : table.cells) {
      csv << p.str() << ',' << c.ar.str() << ',' << c.br.str() << ',' << rlab::to_string(c.verdict.status) << ','
          << rlab::sw::to_string(c.growth.growth) << ',' << fmt(c.growth.last_ratio) << ','
          << fmt(c.growth.contraction) << ',' << fmt(c.distance) << ',' << (c.near_boundary ? 1 : 0) << ','
          << (c.agrees ? 1 : 0);
      for (const auto& n : c.growth.norms) csv << ',' << fmt(n.lower) << ',' << fmt(n.upper);
      csv << '\n';
    }
    json doc;
    doc["config"] = config_block(cfg, "steinweiss");
    doc["summary"] = rlab::io::summary(table);
    json dis = json::array();
    for (const auto& c : table.cells)
      if (!c.agrees) dis.push_back(rlab::io::to_json(c));
    doc["disagreements"] = dis;
    std::string tag = slug(p.str());
    write_file(out / ("steinweiss_scan_p" + tag + ".csv"), csv.str());
    write_file(out / ("steinweiss_scan_p" + tag + ".json"), dump(doc));
    std::cout << dump(doc["summary"]);
    bool ok = table.agreement_rate() >= 0.95 && table.disagreements_far == 0;
    return ok ? kOk : kCheckFailed;
  }

  auto a = rational(cfg.a, "a"), b = rational(cfg.b, "b");
  rlab::sw::ScanOptions so;
  so.margin = cfg.margin;
  so.ladder = ladder(cfg);
  auto cell = rlab::sw::scan_cell(a, b, p, so);
  json doc;
  doc["config"] = config_block(cfg, "steinweiss");
  doc["cell"] = rlab::io::to_json(cell);
  if (!cfg.c.empty()) {
    double c = rational(cfg.c, "c").to_double(), R = cfg.radii.back();
    auto n = static_cast<std::size_t>(std::llround(2.0 * R / cfg.h)) + 1;
    auto cert = rlab::sw::schur_certificate(cell.a, cell.b, c, R, n);
    auto three = rlab::sw::three_region_check(cell.a, cell.b, c, R, n);
    doc["schur"] = {{"c", cfg.c},
                    {"R", R},
                    {"lhsMax", rlab::io::number(cert.lhs_max)},
                    {"ladder", {cert.ladder[0], cert.ladder[1], cert.ladder[2]}},
                    {"precondition", cert.precondition},
                    {"stable", cert.ok},
                    {"threeRegionWorstRatio",
                     {rlab::io::number(three.worst_ratio[0]), rlab::io::number(three.worst_ratio[1]),
                      rlab::io::number(three.worst_ratio[2])}},
                    {"threeRegionOk", three.ok}};
  }
  write_file(out / "steinweiss_cell.json", dump(doc));
  std::cout << dump(doc);
  return cell.agrees || cell.near_boundary ? kOk : kCheckFailed;
}

// ---------------------------------------------------------------- sharpness

int cmd_sharpness(const RunConfig& cfg) {
  rlab::SharpnessParams prm;
  prm.k = cfg.k;
  prm.s = rational(cfg.s, "s");
  prm.ell = rational(cfg.ell, "ell");
  prm.p = finite_p(cfg.p);
  prm.alpha = cfg.alpha;
  prm.beta = cfg.beta;
  prm.gamma = cfg.gamma.empty() ? rlab::Rational(0) : rational(cfg.gamma, "gamma");
  if (!cfg.r.empty()) prm.r = exponent(cfg.r);
  auto rep = rlab::sharpness_report(cfg.theorem, cfg.d, prm);
  json doc = rlab::io::to_json(rep);
  doc["config"] = config_block(cfg, "sharpness");
  bool ok = true;
  for (const auto& pr : rep.probes) ok = ok && pr.consistent;
  doc["pass"] = ok;
  write_file(fs::path(cfg.out) / ("sharpness_" + cfg.theorem + ".json"), dump(doc));
  std::cout << dump(doc);
  return ok ? kOk : kCheckFailed;
}

// --------------------------------------------------------------------- seq

int cmd_seq(const RunConfig& cfg) {
  if (cfg.m < 1 || cfg.instances < 0) throw UsageError("--m must be positive and --instances nonnegative");
  json trig = json::array();
  bool ok = true;
  for (int m = 1; m <= cfg.m; ++m) {
    auto tc = rlab::trig_coefficients(m);
    double worst = 0.0;
    for (int i = 0; i <= 256; ++i) worst = std::max(worst, std::abs(tc.residual(std::numbers::pi * i / 256.0)));
    json coeffs = json::array();
    for (const auto& c : tc.c) coeffs.push_back(c.str());
    trig.push_back({{"m", m}, {"coefficients", coeffs}, {"maxResidual", worst}});
    ok = ok && worst < 1e-12;
  }
  std::mt19937_64 rng(cfg.seed);
  int held = 0;
  double worst_fraction = 0.0;
  for (int i = 0; i < cfg.instances; ++i) {
    auto inst = rlab::random_convex_instance(rng);
    auto bd = rlab::convex_sequence_bound(inst);
    held += bd.satisfied ? 1 : 0;
    worst_fraction = std::max(worst_fraction, bd.value / bd.bound);
  }
  ok = ok && held == cfg.instances;
  json doc;
  doc["config"] = config_block(cfg, "seq");
  doc["trig"] = trig;
  doc["convexBound"] = {{"instances", cfg.instances}, {"held", held}, {"worstValueOverBound", worst_fraction}};
  doc["pass"] = ok;
  write_file(fs::path(cfg.out) / "seq_checks.json", dump(doc));
  std::cout << dump(doc);
  return ok ? kOk : kCheckFailed;
}

// ------------------------------------------------------------------ config

const std::vector<std::string> kCommands{"region", "verify", "steinweiss", "sharpness", "seq"};
const std::vector<std::string> kGlobalKeys{"out", "seed", "threads"};

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r"), e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

// key = value lines; '#' starts a comment. Keys mirror the long flags.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw UsageError("cannot read config file " + path);
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError("config line " + std::to_string(lineno) + " is not key = value");
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    for (char& ch : key)
      if (ch == '_') ch = '-';
    out.emplace_back(key, value);
  }
  return out;
}

// Splices config entries into the argument list ahead of the command line
// flags, so that explicit flags take precedence.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<long>(i));
      break;
    }
  }
  if (path.empty()) return args;
  auto entries = read_config(path);
  std::size_t cmd_pos = args.size();
  for (std::size_t i = 0; i < args.size(); ++i)
    if (std::find(kCommands.begin(), kCommands.end(), args[i]) != kCommands.end()) {
      cmd_pos = i;
      break;
    }
  std::vector<std::string> global, local;
  std::string command;
  auto emit = [](std::vector<std::string>& dst, const std::string& key, const std::string& value) {
    if (value == "true") {
      dst.push_back("--" + key);
    } else if (value != "false") {
      dst.push_back("--" + key);
      dst.push_back(value);
    }
  };
  for (const auto& [key, value] : entries) {
    if (key == "command") {
      command = value;
    } else if (std::find(kGlobalKeys.begin(), kGlobalKeys.end(), key) != kGlobalKeys.end()) {
      emit(global, key, value);
    } else {
      emit(local, key, value);
    }
  }
  std::vector<std::string> out(global);
  if (cmd_pos == args.size()) {
    if (command.empty()) throw UsageError("no command given on the command line or in the config file");
    out.insert(out.end(), args.begin(), args.end());
    out.push_back(command);
    out.insert(out.end(), local.begin(), local.end());
    return out;
  }
  out.insert(out.end(), args.begin(), args.begin() + static_cast<long>(cmd_pos) + 1);
  out.insert(out.end(), local.begin(), local.end());
  out.insert(out.end(), args.begin() + static_cast<long>(cmd_pos) + 1, args.end());
  return out;
}

void print_error(const std::string& kind, const std::string& reason) {
  json j{{"error", kind}, {"reason", reason}};
  std::cerr << j.dump() << "\n";
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  args = expand_config(std::move(args));

  RunConfig cfg;
  CLI::App app{"Restriction estimates: exact verdicts, family exponent fits and weighted convolution scans"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.add_option("--out", cfg.out, "Output directory");
  app.add_option("--seed", cfg.seed, "Seed for sampled checks");
  app.add_option("--threads", cfg.threads, "Worker threads (overrides RESTRICTION_LAB_THREADS)");
  app.set_help_flag("-h,--help");
  app.footer("A --config FILE of key = value lines mirrors the long flags; 'command = NAME' picks the subcommand.");

  auto common = [&](CLI::App* sub) {
    sub->add_option("--d", cfg.d, "Ambient dimension");
    sub->add_option("--p", cfg.p, "Lebesgue exponent as a rational a/b");
    sub->add_option("--k", cfg.k, "Transverse derivative order");
    sub->add_option("--s", cfg.s, "Sobolev order s");
    sub->add_option("--ell", cfg.ell, "Sobolev order ell of the zeroth trace");
  };
  auto* region = app.add_subcommand("region", "Verdicts of every applicable statement and the (k, s) diagram");
  common(region);
  region->add_option("--alpha", cfg.alpha, "Surface inequality: transverse order");
  region->add_option("--beta", cfg.beta, "Surface inequality: r-derivative order");
  region->add_option("--gamma", cfg.gamma, "Surface inequality: Sobolev order");
  region->add_option("--r", cfg.r, "Strichartz outer exponent");

  auto* verify = app.add_subcommand("verify", "Exponent fits along an extremizing family");
  common(verify);
  verify->add_option("--family", cfg.family, "knapp, shift, surface or shifted-knapp");
  verify->add_option("--vanishing", cfg.vanishing, "Vanishing order of the profile on the surface");
  verify->add_option("--n", cfg.n_values, "Family parameter values")->delimiter(',');
  verify->add_option("--grid", cfg.grid, "Chart grid points per axis");
  verify->add_option("--pad", cfg.pad, "Zero-padding factor for spectra");

  auto* stw = app.add_subcommand("steinweiss", "Truncated weighted convolution norms");
  stw->add_option("--p", cfg.p, "Exponent in [1, inf]");
  stw->add_option("--a", cfg.a, "Weight exponent a");
  stw->add_option("--b", cfg.b, "Kernel exponent b");
  stw->add_flag("--scan", cfg.scan, "Scan a grid of (a, b)");
  stw->add_option("--na", cfg.na, "Scan points in a on [0, 2]");
  stw->add_option("--nb", cfg.nb, "Scan points in b on [-1, 2]");
  stw->add_option("--spacing", cfg.h, "Grid spacing");
  stw->add_option("--radii", cfg.radii, "Truncation radii")->delimiter(',');
  stw->add_option("--margin", cfg.margin, "Near-boundary distance");
  stw->add_option("--c", cfg.c, "Schur weight exponent for a certificate");

  auto* sharp = app.add_subcommand("sharpness", "Necessary-condition probes for a tagged statement");
  common(sharp);
  sharp->add_option("--theorem", cfg.theorem,
                    "restriction-sobolev, vanishing-restriction, hdr-necessary, surface-inequality or strichartz");
  sharp->add_option("--alpha", cfg.alpha, "Surface inequality: transverse order");
  sharp->add_option("--beta", cfg.beta, "Surface inequality: r-derivative order");
  sharp->add_option("--gamma", cfg.gamma, "Surface inequality: Sobolev order");
  sharp->add_option("--r", cfg.r, "Strichartz outer exponent");

  auto* seq = app.add_subcommand("seq", "Trigonometric identity and convex sequence bound checks");
  seq->add_option("--m", cfg.m, "Largest m of the identity");
  seq->add_option("--instances", cfg.instances, "Random sequence instances");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    print_error("usage", e.what());
    return kUsage;
  }
  if (cfg.threads > 0) setenv("RESTRICTION_LAB_THREADS", std::to_string(cfg.threads).c_str(), 1);

  if (region->parsed()) return cmd_region(cfg);
  if (verify->parsed()) return cmd_verify(cfg);
  if (stw->parsed()) return cmd_steinweiss(cfg);
  if (sharp->parsed()) return cmd_sharpness(cfg);
  return cmd_seq(cfg);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const UsageError& e) {
    print_error("usage", e.what());
    return kUsage;
  } catch (const rlab::domain_error& e) {
    print_error("invalid-parameters", e.what());
    return kUsage;
  } catch (const rlab::numeric_error& e) {
    print_error("numeric", e.what());
    return kCheckFailed;
  } catch (const std::exception& e) {
    print_error("runtime", e.what());
    return kCheckFailed;
  }
}
