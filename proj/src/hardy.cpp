#include "projhardy/hardy.hpp"

#include <cmath>

namespace projhardy {

Section::Section(Poly f) : f_(std::move(f)) {
  if (!f_.is_holomorphic()) throw InputError("Section: the polynomial must be holomorphic");
}

cd Section::operator()(const Vec2& z) const {
  if (!placed_) return f_.eval(z);
  const cd den = to_base_.denominator(z);
  if (std::abs(den) < 1e-300) throw PreconditionError("Section: point on the pole line of the transport");
  return f_.eval(to_base_.apply_affine(z)) / (den * den);
}

Section Section::transported(const ProjMap& t) const {
  Section out = *this;
  out.to_base_ = to_base_ * t.inverse();
  out.placed_ = true;
  return out;
}

cd bordered_levi_determinant(const HermitianPoly& rho, const Vec2& z) {
  const Vec2 g = rho.dz(z);
  const Mat2 h = rho.levi(z);
  Mat3 m;
  m << 0.0, std::conj(g(0)), std::conj(g(1)),
       g(0), h(0, 0), h(0, 1),
       g(1), h(1, 0), h(1, 1);
  return m.determinant();
}

double fefferman_density(const HermitianPoly& rho, const Vec2& z, std::span<const Vec2> frame) {
  if (frame.size() != 3) throw InputError("fefferman_density: expected 3 tangent vectors");
  const Eigen::Vector4d grad = rho.real_gradient(z);
  const double gnorm = grad.norm();
  if (gnorm == 0.0) throw PreconditionError("fefferman_density: vanishing gradient");
  const double j = bordered_levi_determinant(rho, z).real();
  const double scale = 0.25 * gnorm * gnorm * std::max(1.0, rho.levi(z).norm());
  if (j > 1e-10 * scale)
    throw PreconditionError("fefferman_density: Levi form is negative on the complex tangent line");
  Eigen::Matrix4d m;
  for (int i = 0; i < 3; ++i) m.col(i) = as_real(frame[i]);
  m.col(3) = grad / gnorm;
  return std::cbrt(4.0) * std::cbrt(std::abs(j)) * std::abs(m.determinant()) / gnorm;
}

double edge_measure_density(double eta_weight, std::span<const Vec2> frame) {
  if (frame.size() != 2) throw InputError("edge_measure_density: expected 2 tangent vectors");
  if (eta_weight < 0.0)
    throw PreconditionError("edge_measure_density: eta < 0, the domain is not strictly C-convex here");
  const cd dz = frame[0](0) * frame[1](1) - frame[0](1) * frame[1](0);
  return std::cbrt(eta_weight) * std::abs(dz);
}

double edge_measure_density(const PwsDomain& d, std::span<const int> members, const Vec2& z,
                            std::span<const Vec2> frame, double fit_radius) {
  return edge_measure_density(eta(d, members, z, fit_radius).eta_weight, frame);
}

double BoundaryMeasure::face_density(std::size_t face, const ChartPoint& p) const {
  const Face& f = d_->faces.at(face);
  return fefferman_density(d_->hypersurfaces.at(f.hypersurface).rho, p.z, p.tangents);
}

double BoundaryMeasure::edge_density(std::size_t edge, const ChartPoint& p) const {
  const Edge& e = d_->edges.at(edge);
  return edge_measure_density(*d_, e.members, p.z, p.tangents, fit_radius_);
}

namespace {

// Visits every quadrature node of the boundary with its measure weight
// (quadrature weight times the density of mu).
template <class Visit>
void for_each_measure_node(const BoundaryMeasure& mu, const Resolution& res, Visit&& visit) {
  const PwsDomain& d = mu.domain();
  for (std::size_t i = 0; i < d.faces.size(); ++i) {
    const Chart& chart = *d.faces[i].chart;
    const auto axes = chart.axes();
    for_each_tensor_node(axes, res.faces, [&](std::span<const double> p, double w) {
      const ChartPoint cp = chart.evaluate(p);
      visit(false, cp.z, w * mu.face_density(i, cp));
    });
  }
  for (std::size_t i = 0; i < d.edges.size(); ++i) {
    if (d.edges[i].members.size() != 2) continue;
    const Chart& chart = *d.edges[i].chart;
    const auto axes = chart.axes();
    for_each_tensor_node(axes, res.edges, [&](std::span<const double> p, double w) {
      const ChartPoint cp = chart.evaluate(p);
      visit(true, cp.z, w * mu.edge_density(i, cp));
    });
  }
}

NormReport norm_once(const Section& f, const BoundaryMeasure& mu, const Resolution& res) {
  CompensatedSum faces, edges;
  for_each_measure_node(mu, res, [&](bool on_edge, const Vec2& z, double weight) {
    (on_edge ? edges : faces).add(std::norm(f(z)) * weight);
  });
  NormReport r;
  r.faces = faces.value().real();
  r.edges = edges.value().real();
  r.norm_squared = r.faces + r.edges;
  return r;
}

}  // namespace

NormReport hardy_norm(const Section& f, const BoundaryMeasure& mu, const Resolution& res) {
  NormReport fine = norm_once(f, mu, res);
  const NormReport coarse = norm_once(f, mu, {std::max(2, res.faces / 2), std::max(2, res.edges / 2)});
  fine.error_estimate = std::abs(fine.norm_squared - coarse.norm_squared);
  return fine;
}

Eigen::MatrixXcd gram_matrix(const std::vector<Section>& sections, const BoundaryMeasure& mu, const Resolution& res) {
  const std::size_t m = sections.size();
  std::vector<CompensatedSum> acc(m * m);
  Eigen::VectorXcd values(m);
  for_each_measure_node(mu, res, [&](bool, const Vec2& z, double weight) {
    for (std::size_t i = 0; i < m; ++i) values(i) = sections[i](z);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) acc[i * m + j].add(weight * values(i) * std::conj(values(j)));
  });
  Eigen::MatrixXcd g(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) g(i, j) = acc[i * m + j].value();
  return g;
}

ReproduceReport reproduce(const Section& f, const Vec2& tau, const PwsDomain& d, const Resolution& res) {
  if (!d.contains(tau)) {
    for (const Hypersurface& h : d.hypersurfaces)
      if (std::abs(h.rho.eval(tau)) <= 1e-9)
        throw PoleError("reproduce: tau lies on '" + h.label +
                        "' and hence on its own complex tangent line there; the kernel has a pole");
    throw PreconditionError("reproduce: tau is not an interior point of the domain");
  }
  const HomVec tau_h = HomVec::affine_point(tau);
  ReproduceReport r;
  double estimate = 0.0;
  for (const Face& face : d.faces) {
    const HermitianPoly& rho = d.hypersurfaces.at(face.hypersurface).rho;
    const Chart& chart = *face.chart;
    auto integrand = [&](std::span<const double> p) {
      const ChartPoint cp = chart.evaluate(p);
      const double sign = face_orientation(rho, cp.z, cp.tangents);
      return sign * f(cp.z) * smooth_leray_density(rho, cp.z, tau, cp.tangents).value;
    };
    const auto axes = chart.axes();
    const QuadResult q = integrate_tensor(integrand, axes, res.faces);
    r.faces.push_back(q.value);
    estimate += q.error_estimate;
  }
  for (const Edge& edge : d.edges) {
    if (edge.members.size() != 2) {
      r.edges.push_back(0.0);
      continue;
    }
    const HermitianPoly& r1 = d.hypersurfaces.at(edge.members[0]).rho;
    const HermitianPoly& r2 = d.hypersurfaces.at(edge.members[1]).rho;
    const Chart& chart = *edge.chart;
    auto integrand = [&](std::span<const double> p) {
      const ChartPoint cp = chart.evaluate(p);
      const std::array<HomVec, 2> strong{gradient_hyperplane(r1, cp.z), gradient_hyperplane(r2, cp.z)};
      const double sign = edge_orientation(r1, r2, cp.z, cp.tangents);
      return sign * f(cp.z) * corner_kernel(HomVec::affine_point(cp.z), strong, tau_h, cp.tangents).value;
    };
    const auto axes = chart.axes();
    const QuadResult q = integrate_tensor(integrand, axes, res.edges);
    r.edges.push_back(q.value);
    estimate += q.error_estimate;
  }
  CompensatedSum faces, edges;
  for (const cd& v : r.faces) faces.add(v);
  for (const cd& v : r.edges) edges.add(v);
  r.faces_total = faces.value();
  r.edges_total = edges.value();
  r.value = r.faces_total + r.edges_total;
  r.expected = f(tau);
  const double scale = std::abs(r.expected) > 0.0 ? std::abs(r.expected) : 1.0;
  r.rel_err = std::abs(r.value - r.expected) / scale;
  r.error_estimate = estimate;
  return r;
}

}  // namespace projhardy
