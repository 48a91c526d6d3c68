#include "selftest.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>

#include "projhardy/edge_invariants.hpp"
#include "projhardy/kernels.hpp"
#include "projhardy/spec_io.hpp"

namespace projhardy::cli {

namespace {

class Rng {
public:
  explicit Rng(unsigned seed) : gen_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  cd complex(double r = 1.0) { return {uniform(-r, r), uniform(-r, r)}; }
  /// Uniform in the closed disk of radius r.
  cd disk(double r) {
    const double rho = r * std::sqrt(uniform(0.0, 1.0));
    const double phi = uniform(0.0, 2.0 * kPi);
    return std::polar(rho, phi);
  }
  Vec3 vec3() { return {complex(), complex(), complex()}; }

private:
  std::mt19937_64 gen_;
};

cd bilinear(const Vec3& a, const Vec3& b) { return a.cwiseProduct(b).sum(); }

// Plain (unconjugated) cross product: bilinear(cross(a, b), b) == 0.
Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a(1) * b(2) - a(2) * b(1), a(2) * b(0) - a(0) * b(2), a(0) * b(1) - a(1) * b(0)};
}

struct IncidentDatum {
  HomVec z;
  HomVec w;
  std::array<IncidenceTangent, 3> frame;
};

IncidentDatum random_incident(Rng& rng) {
  const Vec3 z = rng.vec3();
  const Vec3 w = cross(rng.vec3(), z);
  std::array<IncidenceTangent, 3> frame;
  for (auto& t : frame) {
    t.dz = rng.vec3();
    const Vec3 r = rng.vec3();
    const Vec3 e = z.conjugate();
    t.dw = r - (bilinear(w, t.dz) + bilinear(r, z)) / bilinear(e, z) * e;
  }
  return {HomVec(z, Role::point), HomVec(w, Role::hyperplane), frame};
}

double rel(cd a, cd b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

SuiteResult finish(std::string name, int cases, double dev, double tol) {
  return {std::move(name), cases, dev, tol, dev <= tol};
}

std::vector<SuiteResult> simplex_suite(const SuiteOptions& opt) {
  Rng rng(opt.seed);
  std::vector<SuiteResult> out;
  for (const auto& [n, tol] : {std::pair{2, 1e-8}, std::pair{3, 1e-6}}) {
    double dev = 0.0;
    for (int i = 0; i < 20; ++i) {
      std::vector<cd> tau(n);
      for (cd& t : tau) t = rng.disk(0.7);
      dev = std::max(dev, rel(simplex_integral(tau, n, SimplexMode::quadrature),
                              simplex_integral(tau, n, SimplexMode::closed)));
    }
    out.push_back(finish("simplex_n" + std::to_string(n), 20, dev, tol));
  }
  return out;
}

std::vector<SuiteResult> cramer_suite(const SuiteOptions& opt) {
  Rng rng(opt.seed + 1);
  double dev = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Vec3 z = rng.vec3();
    const HomVec w1(cross(rng.vec3(), z), Role::hyperplane);
    const HomVec w2(cross(rng.vec3(), z), Role::hyperplane);
    const cd lhs = z(1) * minor_det(w1, w2, 0);
    const cd rhs = -z(0) * minor_det(w1, w2, 1);
    dev = std::max(dev, std::abs(lhs - rhs) / (z.norm() * w1.coords().norm() * w2.coords().norm()));
  }
  return {finish("cramer", 100, dev, 1e-12)};
}

std::vector<SuiteResult> symmetry_suite(const SuiteOptions& opt) {
  Rng rng(opt.seed + 2);
  double dev = 0.0;
  for (int i = 0; i < 100; ++i) {
    const IncidentDatum d = random_incident(rng);
    std::array<IncidenceTangent, 3> swapped;
    for (int k = 0; k < 3; ++k) swapped[k] = {d.frame[k].dw, d.frame[k].dz};
    const cd forward = omega_cfl(d.z, d.w, d.frame).value;
    const cd backward = omega_cfl(HomVec(d.w.coords(), Role::point), HomVec(d.z.coords(), Role::hyperplane), swapped).value;
    dev = std::max(dev, rel(forward, backward));  // (-1)^n with n = 2
  }
  return {finish("omega_symmetry", 100, dev, 1e-10)};
}

std::vector<SuiteResult> chart_identity_suite(const SuiteOptions& opt) {
  Rng rng(opt.seed + 3);
  double dev_affine = 0.0, dev_chart = 0.0;
  for (int i = 0; i < 100; ++i) {
    const IncidentDatum d = random_incident(rng);
    const cd reference = omega_cfl(d.z, d.w, d.frame, 0, 0).value;
    dev_affine = std::max(dev_affine, rel(omega_affine_form(d.z, d.w, d.frame).value, reference));
    dev_chart = std::max(dev_chart, rel(omega_cfl(d.z, d.w, d.frame, 1, 1).value, reference));
  }
  return {finish("chart_identity", 100, dev_affine, 1e-10), finish("chart_change", 100, dev_chart, 1e-10)};
}

std::string number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "(%.17g)", x);
  return buf;
}

// Edge through 0 in frame position with prescribed quadratic part plus
// random cubic terms.
std::array<HermitianPoly, 2> synthetic_edge(const NormalForm& nf, Rng& rng) {
  const std::array<std::array<double, 3>, 2> q{{{nf.a1, nf.b1, nf.c1}, {nf.a2, nf.b2, nf.c2}}};
  std::array<HermitianPoly, 2> out;
  for (int j = 0; j < 2; ++j) {
    const std::string text = std::string(j == 0 ? "im(z1)" : "im(z2)") + " - " + number(q[j][0]) + "*re(z1)^2 - " +
                             number(q[j][1]) + "*re(z1)*re(z2) - " + number(q[j][2]) + "*re(z2)^2 + " +
                             number(rng.uniform(-1, 1)) + "*re(z1)^3 + " + number(rng.uniform(-1, 1)) +
                             "*abs2(z2)*re(z1)";
    out[j] = parse_poly(text);
  }
  return out;
}

std::vector<SuiteResult> coordinate_law_suite(const SuiteOptions& opt) {
  Rng rng(opt.seed + 4);
  struct Law {
    const char* name;
    ChangeKind kind;
    std::function<cd(Rng&)> param;
  };
  const std::vector<Law> laws{
      {"shift_real", ChangeKind::shift, [](Rng& r) { return cd(r.uniform(-1, 1), 0.0); }},
      {"shift_imaginary", ChangeKind::shift, [](Rng& r) { return cd(0.0, r.uniform(-1, 1)); }},
      {"scale", ChangeKind::scale, [](Rng& r) { return cd(r.uniform(0.5, 2.0), 0.0); }},
      {"swap", ChangeKind::swap, [](Rng&) { return cd(0.0); }},
      {"shear", ChangeKind::shear, [](Rng& r) { return cd(r.uniform(-1, 1), 0.0); }},
  };
  std::vector<SuiteResult> out;
  for (const Law& law : laws) {
    double dev = 0.0;
    for (int i = 0; i < 10; ++i) {
      const NormalForm nf{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1.5, -0.5),
                          rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1.5, -0.5)};
      const auto polys = synthetic_edge(nf, rng);
      const cd p = law.param(rng);
      const ProjMap inverse = coordinate_change_matrix(law.kind, p).inverse();
      const NormalForm fitted = fit_normal_form(transform_poly(polys[0], inverse), transform_poly(polys[1], inverse)).nf;
      const NormalForm tabulated = apply_coordinate_change(fit_normal_form(polys[0], polys[1]).nf, law.kind, p);
      dev = std::max(dev, fitted.max_abs_diff(tabulated));
    }
    out.push_back(finish(std::string("law_") + law.name, 10, dev, 1e-6));
  }
  return out;
}

const char* kPerturbedBidisk = R"json({
  "hypersurfaces": [
    {"label": "sheet1", "rho": "abs2(z1) + 0.1*abs2(z2) - 1"},
    {"label": "sheet2", "rho": "0.1*abs2(z1) + abs2(z2) - 1"}
  ],
  "edges": [{"members": ["sheet1", "sheet2"],
             "chart": {"type": "torus2", "radii": [0.95346258924559235, 0.95346258924559235]}}]
})json";

std::vector<SuiteResult> corner_suite(const SuiteOptions& opt) {
  Rng rng(opt.seed + 5);
  const double sign = opt.flip_corner_sign ? -1.0 : 1.0;
  const PwsDomain d = parse_domain_spec(nlohmann::json::parse(kPerturbedBidisk));
  const Edge& edge = d.edges.front();
  double dev_push = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double p[2] = {rng.uniform(0, 2 * kPi), rng.uniform(0, 2 * kPi)};
    const Vec2 z = edge.chart->evaluate(p).z;
    const Vec2 tau(rng.disk(0.4), rng.disk(0.4));
    const PushforwardReport r = pushforward_corner_check(d, edge, z, tau);
    dev_push = std::max(dev_push, rel(r.fiber_value, sign * r.closed_value));
  }

  // Iterated Cauchy formula on the unit bidisk through the corner kernel alone.
  const Poly f = parse_holomorphic("1 + z1*z2^2 - 2*z1^3");
  const HermitianPoly r1 = parse_poly("abs2(z1) - 1"), r2 = parse_poly("abs2(z2) - 1");
  double dev_cauchy = 0.0;
  for (int i = 0; i < 5; ++i) {
    const Vec2 tau(rng.disk(0.5), rng.disk(0.5));
    const HomVec tau_h = HomVec::affine_point(tau);
    auto integrand = [&](std::span<const double> p) {
      const Vec2 z(std::polar(1.0, p[0]), std::polar(1.0, p[1]));
      const std::array<Vec2, 2> frame{Vec2(cd(0, 1) * z(0), 0.0), Vec2(0.0, cd(0, 1) * z(1))};
      const std::array<HomVec, 2> strong{gradient_hyperplane(r1, z), gradient_hyperplane(r2, z)};
      const double orient = edge_orientation(r1, r2, z, frame);
      return orient * sign * f.eval(z) * corner_kernel(HomVec::affine_point(z), strong, tau_h, frame).value;
    };
    dev_cauchy = std::max(dev_cauchy, rel(integrate_periodic(integrand, 2, 64).value, f.eval(tau)));
  }
  return {finish("corner_pushforward", 20, dev_push, 1e-5), finish("corner_cauchy", 5, dev_cauchy, 1e-10)};
}

using SuiteFn = std::vector<SuiteResult> (*)(const SuiteOptions&);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> r{
      {"simplex", simplex_suite},   {"cramer", cramer_suite},     {"symmetry", symmetry_suite},
      {"chart-identity", chart_identity_suite}, {"coordinate-laws", coordinate_law_suite}, {"corner", corner_suite},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n{"all"};
    for (const auto& [name, fn] : registry()) n.push_back(name);
    return n;
  }();
  return names;
}

std::vector<SuiteResult> run_suites(const std::string& name, const SuiteOptions& opt) {
  if (name.empty()) throw InputError("selftest: empty suite name");
  std::vector<SuiteResult> out;
  bool found = false;
  for (const auto& [suite, fn] : registry())
    if (name == "all" || name == suite) {
      found = true;
      for (SuiteResult& r : fn(opt)) out.push_back(std::move(r));
    }
  if (!found) throw InputError("selftest: unknown suite '" + name + "'");
  return out;
}

nlohmann::json to_json(const SuiteResult& r) {
  return {{"suite", r.name}, {"cases", r.cases}, {"max_deviation", r.max_deviation},
          {"tolerance", r.tolerance}, {"pass", r.pass}};
}

}  // namespace projhardy::cli
