// projhardy: domain checks, reproducing-formula runs, edge-invariant tables
// and built-in self tests from the command line.
//
// Exit codes: 0 pass, 1 numerical tolerance failure, 2 input error,
// 3 precondition violation or kernel pole.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "projhardy/hardy.hpp"
#include "projhardy/spec_io.hpp"
#include "selftest.hpp"

namespace {

using nlohmann::json;
using namespace projhardy;

constexpr int kExitPass = 0;
constexpr int kExitTolerance = 1;
constexpr int kExitInput = 2;
constexpr int kExitPrecondition = 3;

struct Loaded {
  json doc;
  PwsDomain domain;
  std::string hash;
};

Loaded load(const std::string& path) {
  Loaded l;
  l.doc = read_spec_file(path);
  l.domain = parse_domain_spec(l.doc);
  l.hash = spec_hash(l.doc);
  return l;
}

json report(const std::string& command, const json& hash, const json& resolution, json results,
            const json& tolerances, bool pass) {
  return {{"command", command},       {"spec_hash", hash},     {"resolution", resolution},
          {"results", std::move(results)}, {"tolerances", tolerances}, {"pass", pass},
          {"schema_version", kReportSchemaVersion}};
}

void emit(const std::string& text, const std::string& output) {
  if (output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(output);
  if (!out) throw InputError("cannot write '" + output + "'");
  out << text;
}

json point_json(const Vec2& z) { return json::array({to_json(z(0)), to_json(z(1))}); }

std::vector<double> grid_params(const std::vector<Axis>& axes, const std::array<int, 2>& index, int n) {
  std::vector<double> p(axes.size());
  for (std::size_t i = 0; i < axes.size(); ++i) {
    const Axis& a = axes[i];
    const double offset = a.kind == Axis::Kind::periodic ? 0.0 : 0.5;
    p[i] = a.lo + (a.hi - a.lo) * (index[i] + offset) / n;
  }
  return p;
}

// ---------------------------------------------------------------- check-domain

struct CheckDomainArgs {
  std::string spec;
  int samples = 5;
  double radius = 0.05;
  int ball_samples = 400;
  unsigned seed = 1;
  std::string output;
};

int check_domain(const CheckDomainArgs& a) {
  const Loaded l = load(a.spec);
  const PwsDomain& d = l.domain;
  json results = json::array();
  bool pass = true;

  const auto issues = validate_domain(d, a.samples);
  for (const ValidationIssue& issue : issues)
    results.push_back({{"check", "validation"}, {"hypersurface", issue.hypersurface}, {"message", issue.message},
                       {"pass", false}});
  if (issues.empty()) results.push_back({{"check", "validation"}, {"pass", true}});
  pass = pass && issues.empty();

  for (std::size_t e = 0; e < d.edges.size(); ++e) {
    const Chart& chart = *d.edges[e].chart;
    const auto axes = chart.axes();
    if (axes.size() != 2) continue;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const Vec2 z = chart.evaluate(grid_params(axes, {i, j}, 2)).z;
        json entry{{"check", "local_intersection"}, {"edge", e}, {"point", point_json(z)}};
        try {
          const LocalIntersectionReport r = check_local_intersection(d, z, a.radius, a.ball_samples, a.seed);
          entry["members"] = r.members;
          entry["samples"] = r.samples;
          entry["mismatches"] = r.mismatches;
          entry["pass"] = r.pass;
          pass = pass && r.pass;
        } catch (const PreconditionError& err) {
          entry["message"] = err.what();
          entry["pass"] = false;
          pass = false;
        }
        results.push_back(std::move(entry));
      }
  }
  const json resolution{{"samples_per_axis", a.samples}, {"ball_samples", a.ball_samples}};
  const json tolerances{{"radius", a.radius}, {"seed", a.seed}};
  emit(report("check-domain", l.hash, resolution, std::move(results), tolerances, pass).dump(2) + "\n", a.output);
  return pass ? kExitPass : kExitTolerance;
}

// ------------------------------------------------------------------- reproduce

struct ReproduceArgs {
  std::string spec;
  std::vector<std::string> taus{"0,0"};
  std::string f = "1";
  int resolution = 32;
  int edge_resolution = 0;
  double tolerance = 1e-6;
  std::string output;
};

json piece_list(const std::vector<cd>& values) {
  json out = json::array();
  for (const cd& v : values) out.push_back(to_json(v));
  return out;
}

int reproduce_cmd(const ReproduceArgs& a) {
  const Loaded l = load(a.spec);
  const Section f(parse_holomorphic(a.f));
  const Resolution res{a.resolution, a.edge_resolution > 0 ? a.edge_resolution : a.resolution};
  json results = json::array();
  bool pass = true;
  for (const std::string& text : a.taus) {
    const Vec2 tau = parse_point(text);
    const ReproduceReport r = reproduce(f, tau, l.domain, res);
    const bool ok = r.rel_err <= a.tolerance;
    pass = pass && ok;
    results.push_back({{"tau", point_json(tau)},
                       {"value", to_json(r.value)},
                       {"expected", to_json(r.expected)},
                       {"per_piece", {{"faces", piece_list(r.faces)}, {"edges", piece_list(r.edges)}}},
                       {"faces_total", to_json(r.faces_total)},
                       {"edges_total", to_json(r.edges_total)},
                       {"rel_err", r.rel_err},
                       {"error_estimate", r.error_estimate},
                       {"pass", ok}});
  }
  const json resolution{{"faces", res.faces}, {"edges", res.edges}};
  const json tolerances{{"rel_err", a.tolerance}};
  json rep = report("reproduce", l.hash, resolution, std::move(results), tolerances, pass);
  rep["f"] = parse_holomorphic(a.f).to_string();
  emit(rep.dump(2) + "\n", a.output);
  return pass ? kExitPass : kExitTolerance;
}

// ------------------------------------------------------------------------- eta

struct EtaArgs {
  std::string spec;
  int edge = -1;
  int grid = 16;
  std::string format = "json";
  double tolerance = 1e-8;
  double radius = 0.05;
  double fit_radius = 1e-2;
  bool margins = true;
  std::string output;
};

constexpr const char* kEtaCsvHeader = "edge,param1,param2,kappa,eta_weight,c1,c2,b1_norm,b2_norm,margin";

std::string csv_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

int eta_cmd(const EtaArgs& a) {
  const Loaded l = load(a.spec);
  const PwsDomain& d = l.domain;
  std::vector<std::size_t> edges;
  if (a.edge >= 0) {
    if (static_cast<std::size_t>(a.edge) >= d.edges.size())
      throw InputError("eta: edge index " + std::to_string(a.edge) + " out of range");
    edges.push_back(static_cast<std::size_t>(a.edge));
  } else {
    for (std::size_t e = 0; e < d.edges.size(); ++e) edges.push_back(e);
  }

  json rows = json::array();
  std::ostringstream csv;
  csv << kEtaCsvHeader << "\n";
  bool pass = true;
  double kappa_min = std::numeric_limits<double>::infinity();
  double kappa_max = -kappa_min;
  for (std::size_t e : edges) {
    const Edge& edge = d.edges[e];
    if (edge.members.size() != 2) throw InputError("eta: edge " + std::to_string(e) + " is not 2-dimensional");
    const auto axes = edge.chart->axes();
    if (axes.size() != 2) throw InputError("eta: edge chart must have two parameters");
    for (int i = 0; i < a.grid; ++i)
      for (int j = 0; j < a.grid; ++j) {
        const std::vector<double> p = grid_params(axes, {i, j}, a.grid);
        const Vec2 z = edge.chart->evaluate(p).z;
        const EdgeInvariant inv = eta(d, edge.members, z, a.fit_radius);
        double margin = std::numeric_limits<double>::quiet_NaN();
        if (a.margins) margin = check_strict_convexity(d, z, 9, 12, a.radius).margin;
        pass = pass && inv.kappa >= -a.tolerance;
        kappa_min = std::min(kappa_min, inv.kappa);
        kappa_max = std::max(kappa_max, inv.kappa);
        rows.push_back({{"edge", e}, {"params", p}, {"kappa", inv.kappa}, {"eta_weight", inv.eta_weight},
                        {"c1", inv.frame_form.c1}, {"c2", inv.frame_form.c2}, {"b1_norm", inv.b1_norm},
                        {"b2_norm", inv.b2_norm}, {"margin", a.margins ? json(margin) : json(nullptr)}});
        csv << e << "," << csv_number(p[0]) << "," << csv_number(p[1]) << "," << csv_number(inv.kappa) << ","
            << csv_number(inv.eta_weight) << "," << csv_number(inv.frame_form.c1) << ","
            << csv_number(inv.frame_form.c2) << "," << csv_number(inv.b1_norm) << "," << csv_number(inv.b2_norm)
            << "," << (a.margins ? csv_number(margin) : std::string()) << "\n";
      }
  }
  if (a.format == "csv") {
    emit(csv.str(), a.output);
  } else {
    const json resolution{{"grid", a.grid}, {"fit_radius", a.fit_radius}};
    const json tolerances{{"kappa_floor", -a.tolerance}, {"margin_radius", a.radius}};
    json rep = report("eta", l.hash, resolution, std::move(rows), tolerances, pass);
    rep["kappa_min"] = kappa_min;
    rep["kappa_max"] = kappa_max;
    emit(rep.dump(2) + "\n", a.output);
  }
  return pass ? kExitPass : kExitTolerance;
}

// -------------------------------------------------------------------- selftest

struct SelftestArgs {
  std::string suite = "all";
  unsigned seed = 20240601;
  bool flip = false;
  std::string output;
};

int selftest_cmd(const SelftestArgs& a) {
  cli::SuiteOptions opt;
  opt.seed = a.seed;
  opt.flip_corner_sign = a.flip;
  const auto results = cli::run_suites(a.suite, opt);
  json rows = json::array();
  json tolerances = json::object();
  bool pass = true;
  for (const auto& r : results) {
    rows.push_back(cli::to_json(r));
    tolerances[r.name] = r.tolerance;
    pass = pass && r.pass;
  }
  json rep = report("selftest", nullptr, {{"suite", a.suite}}, std::move(rows), tolerances, pass);
  rep["seed"] = a.seed;
  emit(rep.dump(2) + "\n", a.output);
  return pass ? kExitPass : kExitTolerance;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Projective Hardy-space toolkit for piecewise-smooth domains in C^2"};
  app.require_subcommand(1);

  CheckDomainArgs check;
  auto* c = app.add_subcommand("check-domain", "Validate a domain spec (signs, charts, transversality, local intersection)");
  c->add_option("spec", check.spec, "Domain spec JSON")->required();
  c->add_option("--samples", check.samples, "Chart samples per axis")->check(CLI::PositiveNumber);
  c->add_option("--radius", check.radius, "Ball radius for the local-intersection check")->check(CLI::PositiveNumber);
  c->add_option("--ball-samples", check.ball_samples, "Random points per ball")->check(CLI::PositiveNumber);
  c->add_option("--seed", check.seed, "Seed for ball sampling");
  c->add_option("--output", check.output, "Write the report here instead of stdout");

  ReproduceArgs repro;
  auto* r = app.add_subcommand("reproduce", "Integrate a section against the boundary kernel and compare with its value");
  r->add_option("spec", repro.spec, "Domain spec JSON")->required();
  r->add_option("--tau", repro.taus, "Interior point 'z1,z2' (complex as a+bi); repeatable");
  r->add_option("--f", repro.f, "Holomorphic polynomial in z1, z2");
  r->add_option("--resolution", repro.resolution, "Quadrature points per axis")->check(CLI::Range(2, 4096));
  r->add_option("--edge-resolution", repro.edge_resolution, "Points per axis on edges (default: --resolution)")
      ->check(CLI::Range(2, 4096));
  r->add_option("--tolerance", repro.tolerance, "Pass threshold on the relative error")->check(CLI::PositiveNumber);
  r->add_option("--output", repro.output, "Write the report here instead of stdout");

  EtaArgs eta_args;
  auto* e = app.add_subcommand("eta", "Tabulate the edge invariant over a chart grid");
  e->add_option("spec", eta_args.spec, "Domain spec JSON")->required();
  e->add_option("--edge", eta_args.edge, "Edge index (default: every edge)")->check(CLI::NonNegativeNumber);
  e->add_option("--grid", eta_args.grid, "Grid points per chart axis")->check(CLI::Range(1, 1024));
  e->add_option("--format", eta_args.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  e->add_option("--tolerance", eta_args.tolerance, "Fail when kappa < -tolerance")->check(CLI::NonNegativeNumber);
  e->add_option("--radius", eta_args.radius, "Line radius of the strict-convexity margin")->check(CLI::PositiveNumber);
  e->add_option("--fit-radius", eta_args.fit_radius, "Sampling radius of the normal-form fit")
      ->check(CLI::PositiveNumber);
  e->add_flag("!--no-margin", eta_args.margins, "Skip the strict-convexity margin column");
  e->add_option("--output", eta_args.output, "Write the table here instead of stdout");

  SelftestArgs self;
  auto* s = app.add_subcommand("selftest", "Run built-in identity suites");
  s->add_option("--suite", self.suite, "Suite name: " + [] {
    std::string names;
    for (const auto& n : cli::suite_names()) names += (names.empty() ? "" : ", ") + n;
    return names;
  }());
  s->add_option("--seed", self.seed, "Seed for the randomized suites");
  s->add_flag("--flip-corner-sign", self.flip, "Mutation check: negate corner-kernel values");
  s->add_option("--output", self.output, "Write the report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kExitPass : kExitInput;
  }

  try {
    if (*c) return check_domain(check);
    if (*r) return reproduce_cmd(repro);
    if (*e) return eta_cmd(eta_args);
    if (*s) return selftest_cmd(self);
  } catch (const ParseError& err) {
    std::cerr << "input error: " << err.what() << " (at position " << err.position() << ")\n";
    return kExitInput;
  } catch (const InputError& err) {
    std::cerr << "input error: " << err.what() << "\n";
    return kExitInput;
  } catch (const json::exception& err) {
    std::cerr << "input error: " << err.what() << "\n";
    return kExitInput;
  } catch (const PoleError& err) {
    std::cerr << "pole: " << err.what() << "\n";
    return kExitPrecondition;
  } catch (const PreconditionError& err) {
    std::cerr << "precondition violated: " << err.what() << "\n";
    return kExitPrecondition;
  }
  return kExitInput;
}
