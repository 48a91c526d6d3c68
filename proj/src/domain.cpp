#include "projhardy/domain.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace projhardy {

namespace {

cd unit(double angle) { return std::polar(1.0, angle); }

Vec2 from_real(const Eigen::Vector4d& x) { return {cd(x(0), x(1)), cd(x(2), x(3))}; }

// Tangent of the real coordinate x1, y1, x2, y2 (index 0..3).
Vec2 real_direction(int index) {
  Vec2 v = Vec2::Zero();
  v(index / 2) = index % 2 == 0 ? cd(1.0, 0.0) : cd(0.0, 1.0);
  return v;
}

int real_coordinate_index(const std::string& name) {
  static const char* names[4] = {"x1", "y1", "x2", "y2"};
  for (int i = 0; i < 4; ++i)
    if (name == names[i]) return i;
  throw InputError("graph_patch: unknown coordinate '" + name + "' (expected x1, y1, x2 or y2)");
}

double json_number(const nlohmann::json& spec, const char* key) {
  if (!spec.contains(key) || !spec.at(key).is_number())
    throw InputError(std::string("chart ") + spec.value("type", "?") + ": missing numeric '" + key + "'");
  return spec.at(key).get<double>();
}

std::pair<double, double> json_range(const nlohmann::json& value, const std::string& what) {
  if (!value.is_array() || value.size() != 2 || !value[0].is_number() || !value[1].is_number())
    throw InputError(what + ": expected [lo, hi]");
  const double lo = value[0].get<double>(), hi = value[1].get<double>();
  if (!(lo < hi)) throw InputError(what + ": empty range");
  return {lo, hi};
}

class Torus2 final : public Chart {
public:
  Torus2(nlohmann::json spec, std::vector<HermitianPoly> c) : Chart(spec, std::move(c)) {
    const auto& radii = spec.at("radii");
    if (!radii.is_array() || radii.size() != 2) throw InputError("torus2: 'radii' must be [r1, r2]");
    r_ = {radii[0].get<double>(), radii[1].get<double>()};
  }
  std::vector<Axis> axes() const override { return {Axis::periodic(), Axis::periodic()}; }

protected:
  Ansatz ansatz(std::span<const double> p, std::span<const double> s) const override {
    const cd e1 = unit(p[0]), e2 = unit(p[1]);
    Ansatz a;
    a.z = Vec2(s[0] * e1, s[1] * e2);
    a.dp = {Vec2(cd(0, 1) * a.z(0), 0.0), Vec2(0.0, cd(0, 1) * a.z(1))};
    a.ds = {Vec2(e1, 0.0), Vec2(0.0, e2)};
    return a;
  }
  std::vector<double> initial_unknowns(std::span<const double>) const override { return {r_[0], r_[1]}; }
  std::shared_ptr<Chart> clone() const override { return std::make_shared<Torus2>(*this); }

private:
  std::array<double, 2> r_{};
};

class SpherePolar final : public Chart {
public:
  SpherePolar(nlohmann::json spec, std::vector<HermitianPoly> c)
      : Chart(spec, std::move(c)), radius_(json_number(spec, "radius")) {}
  std::vector<Axis> axes() const override {
    return {Axis::interval(0.0, 0.5 * kPi), Axis::periodic(), Axis::periodic()};
  }

protected:
  Ansatz ansatz(std::span<const double> p, std::span<const double> s) const override {
    const double c = std::cos(p[0]), sn = std::sin(p[0]);
    const cd e1 = unit(p[1]), e2 = unit(p[2]);
    Ansatz a;
    a.z = Vec2(s[0] * c * e1, s[0] * sn * e2);
    a.dp = {Vec2(-s[0] * sn * e1, s[0] * c * e2), Vec2(cd(0, 1) * a.z(0), 0.0), Vec2(0.0, cd(0, 1) * a.z(1))};
    a.ds = {Vec2(c * e1, sn * e2)};
    return a;
  }
  std::vector<double> initial_unknowns(std::span<const double>) const override { return {radius_}; }
  std::shared_ptr<Chart> clone() const override { return std::make_shared<SpherePolar>(*this); }

private:
  double radius_;
};

// Face of a Reinhardt hypersurface: free modulus s, both angles, and the own
// modulus solved from the constraint.
class ReinhardtFace final : public Chart {
public:
  ReinhardtFace(nlohmann::json spec, std::vector<HermitianPoly> c) : Chart(spec, std::move(c)) {
    const int free = spec.at("free").get<int>();
    if (free != 1 && free != 2) throw InputError("reinhardt_face: 'free' must be 1 or 2");
    free_ = free - 1;
    range_ = json_range(spec.at("range"), "reinhardt_face range");
    guess_ = spec.value("guess", 1.0);
  }
  std::vector<Axis> axes() const override {
    return {Axis::interval(range_.first, range_.second), Axis::periodic(), Axis::periodic()};
  }

protected:
  Ansatz ansatz(std::span<const double> p, std::span<const double> s) const override {
    const int own = 1 - free_;
    const cd ef = unit(p[1 + free_]), eo = unit(p[1 + own]);
    Ansatz a;
    a.z(free_) = p[0] * ef;
    a.z(own) = s[0] * eo;
    Vec2 ds_free = Vec2::Zero(), dth1 = Vec2::Zero(), dth2 = Vec2::Zero(), dr = Vec2::Zero();
    ds_free(free_) = ef;
    dth1(0) = cd(0, 1) * a.z(0);
    dth2(1) = cd(0, 1) * a.z(1);
    dr(own) = eo;
    a.dp = {ds_free, dth1, dth2};
    a.ds = {dr};
    return a;
  }
  std::vector<double> initial_unknowns(std::span<const double>) const override { return {guess_}; }
  std::shared_ptr<Chart> clone() const override { return std::make_shared<ReinhardtFace>(*this); }

private:
  int free_ = 0;
  std::pair<double, double> range_;
  double guess_ = 1.0;
};

// Graph over some of the real coordinates; the rest are solved for.
class GraphPatch final : public Chart {
public:
  GraphPatch(nlohmann::json spec, std::vector<HermitianPoly> c) : Chart(spec, std::move(c)) {
    const auto& free = spec.at("free");
    const auto& ranges = spec.at("ranges");
    if (!free.is_array() || !ranges.is_array() || free.size() != ranges.size())
      throw InputError("graph_patch: 'free' and 'ranges' must be arrays of equal length");
    std::array<bool, 4> used{};
    for (std::size_t i = 0; i < free.size(); ++i) {
      const int idx = real_coordinate_index(free[i].get<std::string>());
      if (used[idx]) throw InputError("graph_patch: repeated coordinate");
      used[idx] = true;
      free_.push_back(idx);
      ranges_.push_back(json_range(ranges[i], "graph_patch range"));
    }
    for (int i = 0; i < 4; ++i)
      if (!used[i]) solved_.push_back(i);
    guess_.assign(solved_.size(), 0.0);
    if (spec.contains("guess")) {
      const auto& g = spec.at("guess");
      if (!g.is_array() || g.size() != solved_.size())
        throw InputError("graph_patch: 'guess' must list one value per solved coordinate");
      for (std::size_t i = 0; i < solved_.size(); ++i) guess_[i] = g[i].get<double>();
    }
  }
  std::vector<Axis> axes() const override {
    std::vector<Axis> out;
    for (const auto& [lo, hi] : ranges_) out.push_back(Axis::interval(lo, hi));
    return out;
  }

protected:
  Ansatz ansatz(std::span<const double> p, std::span<const double> s) const override {
    Eigen::Vector4d x = Eigen::Vector4d::Zero();
    Ansatz a;
    for (std::size_t i = 0; i < free_.size(); ++i) {
      x(free_[i]) = p[i];
      a.dp.push_back(real_direction(free_[i]));
    }
    for (std::size_t i = 0; i < solved_.size(); ++i) {
      x(solved_[i]) = s[i];
      a.ds.push_back(real_direction(solved_[i]));
    }
    a.z = from_real(x);
    return a;
  }
  std::vector<double> initial_unknowns(std::span<const double>) const override { return guess_; }
  std::shared_ptr<Chart> clone() const override { return std::make_shared<GraphPatch>(*this); }

private:
  std::vector<int> free_, solved_;
  std::vector<std::pair<double, double>> ranges_;
  std::vector<double> guess_;
};

std::size_t unknown_count(const std::string& type, const nlohmann::json& spec) {
  if (type == "torus2") return 2;
  if (type == "graph_patch") return 4 - spec.at("free").size();
  return 1;
}

}  // namespace

ChartPoint Chart::evaluate_base(std::span<const double> p) const {
  std::vector<double> s = initial_unknowns(p);
  const std::size_t m = s.size();
  Ansatz a = ansatz(p, s);
  Eigen::MatrixXd jac(m, m);
  Eigen::VectorXd res(m);
  auto linearize = [&] {
    for (std::size_t j = 0; j < m; ++j) {
      res(j) = constraints_[j].eval(a.z);
      for (std::size_t k = 0; k < m; ++k) jac(j, k) = constraints_[j].directional(a.z, a.ds[k]);
    }
  };
  for (int iter = 0; iter < 60; ++iter) {
    linearize();
    const Eigen::VectorXd step = jac.fullPivLu().solve(res);
    double size = 0.0, scale = 1.0;
    for (std::size_t k = 0; k < m; ++k) {
      s[k] -= step(k);
      size = std::max(size, std::abs(step(k)));
      scale = std::max(scale, std::abs(s[k]));
    }
    a = ansatz(p, s);
    if (size <= 1e-15 * scale) break;
  }
  linearize();
  if (res.cwiseAbs().maxCoeff() > 1e-10)
    throw PreconditionError("chart " + spec_.value("type", std::string("?")) +
                            ": Newton solve did not reach the constraint surface");
  // Implicit differentiation: ds/dp = -J^{-1} (d rho / dp).
  Eigen::MatrixXd dp(m, a.dp.size());
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < a.dp.size(); ++i) dp(j, i) = constraints_[j].directional(a.z, a.dp[i]);
  const Eigen::MatrixXd ds_dp = -jac.fullPivLu().solve(dp);
  ChartPoint out{a.z, {}};
  for (std::size_t i = 0; i < a.dp.size(); ++i) {
    Vec2 t = a.dp[i];
    for (std::size_t k = 0; k < m; ++k) t += ds_dp(k, i) * a.ds[k];
    out.tangents.push_back(t);
  }
  return out;
}

ChartPoint Chart::evaluate(std::span<const double> params) const {
  ChartPoint base = evaluate_base(params);
  if (placement_.matrix() == Mat3::Identity()) return base;
  const Mat2 jac = placement_.jacobian(base.z);
  ChartPoint out{placement_.apply_affine(base.z), {}};
  for (const Vec2& v : base.tangents) out.tangents.push_back(jac * v);
  return out;
}

std::shared_ptr<const Chart> Chart::placed(const ProjMap& t) const {
  std::shared_ptr<Chart> copy = clone();
  copy->placement_ = t * placement_;
  return copy;
}

std::shared_ptr<const Chart> make_chart(const nlohmann::json& spec, std::vector<HermitianPoly> constraints) {
  if (!spec.is_object() || !spec.contains("type") || !spec.at("type").is_string())
    throw InputError("chart: expected an object with a string 'type'");
  const std::string type = spec.at("type").get<std::string>();
  if (type != "torus2" && type != "sphere_polar" && type != "graph_patch" && type != "reinhardt_face")
    throw InputError("chart: unknown type '" + type + "'");
  try {
    if (unknown_count(type, spec) != constraints.size())
      throw InputError("chart " + type + ": needs " + std::to_string(unknown_count(type, spec)) +
                       " defining functions, got " + std::to_string(constraints.size()));
    if (type == "torus2") return std::make_shared<Torus2>(spec, std::move(constraints));
    if (type == "sphere_polar") return std::make_shared<SpherePolar>(spec, std::move(constraints));
    if (type == "graph_patch") return std::make_shared<GraphPatch>(spec, std::move(constraints));
    return std::make_shared<ReinhardtFace>(spec, std::move(constraints));
  } catch (const nlohmann::json::exception& e) {
    throw InputError("chart " + type + ": " + e.what());
  }
}

int PwsDomain::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < hypersurfaces.size(); ++i)
    if (hypersurfaces[i].label == label) return static_cast<int>(i);
  throw InputError("unknown hypersurface label '" + label + "'");
}

bool PwsDomain::contains(const Vec2& z) const {
  if (combination == Combination::intersection)
    return std::all_of(hypersurfaces.begin(), hypersurfaces.end(), [&](const auto& h) { return h.rho.eval(z) < 0.0; });
  return std::any_of(hypersurfaces.begin(), hypersurfaces.end(), [&](const auto& h) { return h.rho.eval(z) < 0.0; });
}

PwsDomain PwsDomain::transformed(const ProjMap& t) const {
  PwsDomain out;
  out.combination = combination;
  for (const auto& h : hypersurfaces) out.hypersurfaces.push_back({h.label, transform_poly(h.rho, t)});
  for (const auto& f : faces) out.faces.push_back({f.hypersurface, f.chart->placed(t)});
  for (const auto& e : edges) out.edges.push_back({e.members, e.chart->placed(t)});
  for (const auto& p : interior_points) out.interior_points.push_back(t.apply_affine(p));
  return out;
}

Eigen::Vector4d as_real(const Vec2& v) { return {v(0).real(), v(0).imag(), v(1).real(), v(1).imag()}; }

double face_orientation(const HermitianPoly& rho, const Vec2& z, std::span<const Vec2> frame) {
  if (frame.size() != 3) throw InputError("face_orientation: expected 3 tangent vectors");
  Eigen::Matrix4d m;
  m.col(0) = rho.real_gradient(z);
  for (int i = 0; i < 3; ++i) m.col(i + 1) = as_real(frame[i]);
  return m.determinant() > 0.0 ? 1.0 : -1.0;
}

double edge_orientation(const HermitianPoly& rho1, const HermitianPoly& rho2, const Vec2& z,
                        std::span<const Vec2> frame) {
  if (frame.size() != 2) throw InputError("edge_orientation: expected 2 tangent vectors");
  Eigen::Matrix4d m;
  m.col(0) = rho1.real_gradient(z);
  m.col(1) = rho2.real_gradient(z);
  m.col(2) = as_real(frame[0]);
  m.col(3) = as_real(frame[1]);
  return m.determinant() < 0.0 ? 1.0 : -1.0;
}

std::vector<int> active_members(const PwsDomain& d, const Vec2& z, double tol) {
  std::vector<int> out;
  for (std::size_t i = 0; i < d.hypersurfaces.size(); ++i)
    if (std::abs(d.hypersurfaces[i].rho.eval(z)) <= tol) out.push_back(static_cast<int>(i));
  return out;
}

std::vector<HomVec> strong_tangents(const PwsDomain& d, const Edge& e, const Vec2& z) {
  std::vector<HomVec> out;
  for (int m : e.members) out.push_back(gradient_hyperplane(d.hypersurfaces.at(m).rho, z));
  return out;
}

HomVec weak_tangent(const PwsDomain& d, std::span<const int> members, const Vec2& z, std::span<const double> t) {
  if (t.size() != members.size()) throw InputError("weak_tangent: barycentric coordinates do not match the edge");
  double sum = 0.0;
  for (double tl : t) {
    if (tl < -1e-14) throw InputError("weak_tangent: t lies outside the simplex");
    sum += tl;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw InputError("weak_tangent: t does not sum to 1");
  Vec3 w = Vec3::Zero();
  for (std::size_t l = 0; l < members.size(); ++l)
    w += t[l] * gradient_hyperplane(d.hypersurfaces.at(members[l]).rho, z).coords();
  return HomVec(w, Role::hyperplane);
}

HomVec weak_tangent(const PwsDomain& d, const Edge& e, const Vec2& z, std::span<const double> t) {
  return weak_tangent(d, std::span<const int>(e.members), z, t);
}

Vec2 project_to_edge(const PwsDomain& d, std::span<const int> members, const Vec2& z, double tol) {
  const std::size_t m = members.size();
  Eigen::Vector4d x = as_real(z);
  for (int iter = 0; iter < 60; ++iter) {
    const Vec2 zc = from_real(x);
    Eigen::MatrixXd jac(m, 4);
    Eigen::VectorXd res(m);
    for (std::size_t j = 0; j < m; ++j) {
      const HermitianPoly& rho = d.hypersurfaces.at(members[j]).rho;
      res(j) = rho.eval(zc);
      jac.row(j) = rho.real_gradient(zc).transpose();
    }
    if (res.cwiseAbs().maxCoeff() <= tol) return zc;
    const Eigen::MatrixXd gram = jac * jac.transpose();
    x -= jac.transpose() * gram.ldlt().solve(res);
  }
  throw PreconditionError("project_to_edge: Newton projection did not converge");
}

LocalIntersectionReport check_local_intersection(const PwsDomain& d, const Vec2& z, double radius, int samples,
                                                 unsigned seed) {
  LocalIntersectionReport report;
  report.members = active_members(d, z);
  if (report.members.empty()) throw PreconditionError("check_local_intersection: point is not on the boundary");
  std::vector<int> others;
  for (std::size_t i = 0; i < d.hypersurfaces.size(); ++i)
    if (std::find(report.members.begin(), report.members.end(), static_cast<int>(i)) == report.members.end())
      others.push_back(static_cast<int>(i));

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform;
  for (int s = 0; s < samples; ++s) {
    Eigen::Vector4d dir(normal(rng), normal(rng), normal(rng), normal(rng));
    dir *= radius * std::pow(uniform(rng), 0.25) / dir.norm();
    const Vec2 p = z + from_real(dir);
    for (int o : others) {
      const HermitianPoly& rho = d.hypersurfaces[o].rho;
      if ((rho.eval(p) < 0.0) != (rho.eval(z) < 0.0))
        throw PreconditionError("check_local_intersection: radius too large, hypersurface '" +
                                d.hypersurfaces[o].label + "' crosses the ball");
    }
    const bool local = std::all_of(report.members.begin(), report.members.end(),
                                   [&](int m) { return d.hypersurfaces[m].rho.eval(p) < 0.0; });
    if (local != d.contains(p)) ++report.mismatches;
    ++report.samples;
  }
  report.pass = report.mismatches == 0;
  return report;
}

StrictnessReport check_strict_convexity(const PwsDomain& d, const Vec2& z, int t_grid, int ambient_grid,
                                        std::optional<double> local_radius, double tol) {
  const std::vector<int> members = active_members(d, z);
  if (members.empty() || members.size() > 2)
    throw PreconditionError("check_strict_convexity: point is not on a face or a 2-dimensional edge");
  if (t_grid < 1 || ambient_grid < 1) throw InputError("check_strict_convexity: grids must be positive");
  const double radius = local_radius.value_or(1.0);

  StrictnessReport report;
  report.margin = std::numeric_limits<double>::infinity();
  const int lines = members.size() == 1 ? 1 : t_grid + 1;
  for (int i = 0; i < lines; ++i) {
    std::vector<double> t;
    if (members.size() == 1)
      t = {1.0};
    else
      t = {static_cast<double>(i) / t_grid, 1.0 - static_cast<double>(i) / t_grid};
    const HomVec w = weak_tangent(d, members, z, t);
    Vec2 v(-w[2], w[1]);
    v /= v.norm();
    double line_margin = std::numeric_limits<double>::infinity();
    for (int a = 0; a < ambient_grid; ++a) {
      const double r = radius * (a + 1.0) / ambient_grid;
      for (int b = 0; b < ambient_grid; ++b) {
        const cd zeta = std::polar(r, 2.0 * kPi * b / ambient_grid);
        const Vec2 p = z + zeta * v;
        double worst = -std::numeric_limits<double>::infinity();
        for (int m : members) worst = std::max(worst, d.hypersurfaces[m].rho.eval(p));
        line_margin = std::min(line_margin, worst / (r * r));
      }
    }
    report.t_values.push_back(t[0]);
    report.line_margins.push_back(line_margin);
    report.margin = std::min(report.margin, line_margin);
  }
  report.avoids = report.margin >= -tol;
  report.strict = report.margin > tol;
  return report;
}

namespace {

// Uniformly spaced interior sample parameters of a chart.
std::vector<std::vector<double>> sample_params(const Chart& chart, int n) {
  const std::vector<Axis> axes = chart.axes();
  std::vector<std::vector<double>> out;
  std::vector<int> idx(axes.size(), 0);
  for (;;) {
    std::vector<double> p(axes.size());
    for (std::size_t k = 0; k < axes.size(); ++k)
      p[k] = axes[k].lo + (axes[k].hi - axes[k].lo) * (idx[k] + 0.5) / n;
    out.push_back(std::move(p));
    std::size_t k = 0;
    while (k < axes.size() && ++idx[k] == n) idx[k++] = 0;
    if (k == axes.size()) break;
  }
  return out;
}

}  // namespace

std::vector<ValidationIssue> validate_domain(const PwsDomain& d, int samples_per_axis) {
  std::vector<ValidationIssue> issues;
  const bool intersection = d.combination == Combination::intersection;
  auto label = [&](int i) { return d.hypersurfaces.at(i).label; };
  std::vector<bool> reported(d.hypersurfaces.size(), false);
  auto sign_issue = [&](int i, const std::string& where) {
    if (reported[i]) return;
    reported[i] = true;
    issues.push_back({label(i), "rho is non-negative " + where + " (orientation must make rho < 0 inside)"});
  };

  for (const Vec2& p : d.interior_points) {
    if (intersection) {
      for (std::size_t i = 0; i < d.hypersurfaces.size(); ++i)
        if (d.hypersurfaces[i].rho.eval(p) >= 0.0) sign_issue(static_cast<int>(i), "at an interior point");
    } else if (!d.contains(p)) {
      issues.push_back({"", "interior point lies outside the domain"});
    }
  }

  auto check_piece = [&](const Chart& chart, const std::vector<int>& members, const std::string& what) {
    for (const auto& p : sample_params(chart, samples_per_axis)) {
      ChartPoint cp;
      try {
        cp = chart.evaluate(p);
      } catch (const PreconditionError& e) {
        issues.push_back({label(members.front()), what + ": " + e.what()});
        return;
      }
      for (int m : members) {
        const double r = d.hypersurfaces[m].rho.eval(cp.z);
        if (std::abs(r) > 1e-9) {
          issues.push_back({label(m), what + ": chart point off the hypersurface (|rho| = " + std::to_string(std::abs(r)) + ")"});
          return;
        }
      }
      if (intersection)
        for (std::size_t i = 0; i < d.hypersurfaces.size(); ++i) {
          if (std::find(members.begin(), members.end(), static_cast<int>(i)) != members.end()) continue;
          if (d.hypersurfaces[i].rho.eval(cp.z) >= 0.0) sign_issue(static_cast<int>(i), "on " + what);
        }
      if (members.size() == 2) {
        const Vec2 g1 = d.hypersurfaces[members[0]].rho.dz(cp.z);
        const Vec2 g2 = d.hypersurfaces[members[1]].rho.dz(cp.z);
        if (std::abs(g1(0) * g2(1) - g1(1) * g2(0)) <= 1e-8 * g1.norm() * g2.norm()) {
          issues.push_back({label(members[0]), what + ": members do not meet complex transversely"});
          return;
        }
      }
    }
  };
  for (std::size_t f = 0; f < d.faces.size(); ++f)
    check_piece(*d.faces[f].chart, {d.faces[f].hypersurface}, "face " + std::to_string(f));
  for (std::size_t e = 0; e < d.edges.size(); ++e)
    check_piece(*d.edges[e].chart, d.edges[e].members, "edge " + std::to_string(e));
  return issues;
}

}  // namespace projhardy
