#include "projhardy/kernels.hpp"

#include <cmath>
#include <sstream>

namespace projhardy {

namespace {

Eigen::VectorXcd stack(const IncidenceTangent& t) {
  Eigen::VectorXcd v(6);
  v << t.dz, t.dw;
  return v;
}

// Alternating sum a(v1) B(v2, v3) - a(v2) B(v1, v3) + a(v3) B(v1, v2).
template <class A, class B>
cd wedge_one_two(const A& a, const B& b) {
  return a(0) * b(1, 2) - a(1) * b(0, 2) + a(2) * b(0, 1);
}

void require_incident(const HomVec& z, const HomVec& w, std::span<const IncidenceTangent> frame) {
  if (z.role() != Role::point || w.role() != Role::hyperplane)
    throw InputError("universal form: expected (point, hyperplane)");
  if (frame.size() != 3) throw InputError("universal form: expected 3 tangent vectors");
  const double zn = z.coords().norm(), wn = w.coords().norm();
  if (std::abs(pair(z, w)) > 1e-10 * zn * wn) throw InputError("universal form: (z, w) is not incident");
  for (const auto& v : frame) {
    const cd drift = w.coords().cwiseProduct(v.dz).sum() + v.dw.cwiseProduct(z.coords()).sum();
    const double scale = wn * v.dz.norm() + zn * v.dw.norm();
    if (std::abs(drift) > 1e-10 * std::max(scale, 1e-300))
      throw InputError("universal form: frame vector is not tangent to the incidence locus");
  }
}

Vec2 holomorphic_gradient_derivative(const HermitianPoly& rho, const Vec2& z, const Vec2& v) {
  return rho.hess_holo(z) * v + rho.levi(z) * v.conjugate();
}

// Lift of an affine tangent vector v at z through the Gauss map of rho.
IncidenceTangent gauss_lift(const HermitianPoly& rho, const Vec2& z, const Vec2& v) {
  const Vec2 g = rho.dz(z);
  const Vec2 dg = holomorphic_gradient_derivative(rho, z, v);
  IncidenceTangent t;
  t.dz = Vec3(0.0, v(0), v(1));
  t.dw = Vec3(-(dg(0) * z(0) + dg(1) * z(1) + g(0) * v(0) + g(1) * v(1)), dg(0), dg(1));
  return t;
}

int largest_index(const Vec3& v) {
  Eigen::Index i = 0;
  v.cwiseAbs().maxCoeff(&i);
  return static_cast<int>(i);
}

}  // namespace

Density omega_cfl(const HomVec& z, const HomVec& w, std::span<const IncidenceTangent> frame, int j, int k) {
  require_incident(z, w, frame);
  if (j < 0 || j > 2 || k < 0 || k > 2) throw InputError("omega_cfl: chart indices must lie in 0..2");
  const Vec3& zc = z.coords();
  const Vec3& wc = w.coords();
  if (std::abs(zc(j)) <= 1e-14 * zc.norm() || std::abs(wc(k)) <= 1e-14 * wc.norm())
    throw PreconditionError("omega_cfl: point outside the chart z_j != 0, w_k != 0");

  // dZ(i, l) = d(z_l / z_j)(v_i), dW(i, l) = d(w_l / w_k)(v_i)
  Eigen::Matrix3cd dZ, dW;
  for (int i = 0; i < 3; ++i)
    for (int l = 0; l < 3; ++l) {
      dZ(i, l) = (frame[i].dz(l) * zc(j) - zc(l) * frame[i].dz(j)) / (zc(j) * zc(j));
      dW(i, l) = (frame[i].dw(l) * wc(k) - wc(l) * frame[i].dw(k)) / (wc(k) * wc(k));
    }
  const Vec3 ratio = zc / zc(j);
  const Vec3 alpha = dW * ratio;
  auto beta = [&](int a, int b) {
    return dZ.row(a).cwiseProduct(dW.row(b)).sum() - dZ.row(b).cwiseProduct(dW.row(a)).sum();
  };
  const cd value = zc(j) * zc(j) * wc(k) * wc(k) / (kTwoPiI * kTwoPiI) * wedge_one_two(alpha, beta);

  Density d{value, {2, 0}, {2, 0}, 3, {}};
  for (const auto& v : frame) d.frame.push_back(stack(v));
  return d;
}

Density omega_affine_form(const HomVec& z, const HomVec& w, std::span<const IncidenceTangent> frame) {
  require_incident(z, w, frame);
  const Vec3& zc = z.coords();
  const Vec3& wc = w.coords();
  if (std::abs(zc(0)) <= 1e-14 * zc.norm() || std::abs(zc(2)) <= 1e-14 * zc.norm() ||
      std::abs(wc(0)) <= 1e-14 * wc.norm())
    throw PreconditionError("omega_affine_form: needs z0, z2, w0 != 0");
  Eigen::Matrix3cd m;
  for (int i = 0; i < 3; ++i) {
    const auto& v = frame[i];
    m(i, 0) = -(v.dw(1) * wc(0) - wc(1) * v.dw(0)) / (wc(0) * wc(0));
    m(i, 1) = (v.dz(1) * zc(0) - zc(1) * v.dz(0)) / (zc(0) * zc(0));
    m(i, 2) = (v.dz(2) * zc(0) - zc(2) * v.dz(0)) / (zc(0) * zc(0));
  }
  const cd z2_hat = zc(2) / zc(0);
  const cd value = zc(0) * zc(0) * wc(0) * wc(0) / (kTwoPiI * kTwoPiI) / z2_hat * m.determinant();
  Density d{value, {2, 0}, {2, 0}, 3, {}};
  for (const auto& v : frame) d.frame.push_back(stack(v));
  return d;
}

Density smooth_leray_density(const HermitianPoly& rho, const Vec2& z, const Vec2& tau, std::span<const Vec2> frame) {
  if (frame.size() != 3) throw InputError("smooth_leray_density: expected 3 tangent vectors");
  const Vec2 g = rho.dz(z);
  const cd denom = g(0) * (z(0) - tau(0)) + g(1) * (z(1) - tau(1));
  if (std::abs(denom) <= 1e-14 * g.norm() * (z - tau).norm()) {
    std::ostringstream os;
    const HomVec w = gradient_hyperplane(rho, z);
    os << "smooth_leray_density: tau lies on the tangent hyperplane [" << w[0] << " : " << w[1] << " : " << w[2] << "]";
    throw PoleError(os.str());
  }
  const Mat2 h = rho.levi(z);
  auto a = [&](int i) { return g(0) * frame[i](0) + g(1) * frame[i](1); };
  auto b = [&](int p, int q) {
    const Vec2& u = frame[p];
    const Vec2& v = frame[q];
    cd s = 0.0;
    for (int k = 0; k < 2; ++k)
      for (int j = 0; j < 2; ++j) s += h(k, j) * (std::conj(u(j)) * v(k) - std::conj(v(j)) * u(k));
    return s;
  };
  const cd value = wedge_one_two(a, b) / (kTwoPiI * kTwoPiI * denom * denom);
  Density d{value, {0, 0}, {0, 0}, 3, {}};
  for (const auto& v : frame) d.frame.push_back(v);
  return d;
}

Density gauss_map_leray_density(const HermitianPoly& rho, const Vec2& z, const Vec2& tau, std::span<const Vec2> frame) {
  if (frame.size() != 3) throw InputError("gauss_map_leray_density: expected 3 tangent vectors");
  const HomVec zh = HomVec::affine_point(z);
  const HomVec w = gradient_hyperplane(rho, z);
  std::array<IncidenceTangent, 3> lifted;
  for (int i = 0; i < 3; ++i) lifted[i] = gauss_lift(rho, z, frame[i]);
  const cd p = pair(HomVec::affine_point(tau), w);
  if (std::abs(p) <= 1e-14 * w.coords().norm()) throw PoleError("gauss_map_leray_density: tau on the tangent hyperplane");
  Density d = omega_cfl(zh, w, lifted, 0, largest_index(w.coords()));
  d.value /= p * p;
  d.z_bidegree = {2, 0};
  d.w_bidegree = {0, 0};
  return d;
}

cd minor_det(const HomVec& w1, const HomVec& w2, int i) {
  const int a = i == 0 ? 1 : 0;
  const int b = i == 2 ? 1 : 2;
  return w1[a] * w2[b] - w1[b] * w2[a];
}

Density corner_kernel(const HomVec& z, std::span<const HomVec> strong, const HomVec& tau, std::span<const Vec2> frame) {
  if (strong.size() != 2) throw InputError("corner_kernel: expected two strong tangents");
  if (frame.size() != 2) throw InputError("corner_kernel: expected 2 tangent vectors");
  cd prod = 1.0;
  for (const HomVec& w : strong) {
    const cd p = pair(tau, w);
    if (std::abs(p) <= 1e-14 * tau.coords().norm() * w.coords().norm()) {
      std::ostringstream os;
      os << "corner_kernel: tau lies on the strong tangent [" << w[0] << " : " << w[1] << " : " << w[2] << "]";
      throw PoleError(os.str());
    }
    prod *= p;
  }
  const cd dz = frame[0](0) * frame[1](1) - frame[0](1) * frame[1](0);
  const cd value = minor_det(strong[0], strong[1], 0) / prod * z[0] * z[0] * dz / (kTwoPiI * kTwoPiI);
  Density d{value, {2, 0}, {-2, 0}, 2, {}};
  for (const auto& v : frame) d.frame.push_back(v);
  return d;
}

std::array<Vec2, 2> edge_tangent_frame(const PwsDomain& d, std::span<const int> members, const Vec2& z) {
  if (members.size() != 2) throw InputError("edge_tangent_frame: expected a 2-dimensional edge");
  const HermitianPoly& r1 = d.hypersurfaces.at(members[0]).rho;
  const HermitianPoly& r2 = d.hypersurfaces.at(members[1]).rho;
  Eigen::Matrix<double, 2, 4> normals;
  normals.row(0) = r1.real_gradient(z).transpose();
  normals.row(1) = r2.real_gradient(z).transpose();
  const Eigen::MatrixXd kernel = Eigen::FullPivLU<Eigen::MatrixXd>(normals).kernel();
  if (kernel.cols() != 2) throw PreconditionError("edge_tangent_frame: hypersurfaces are not transverse");
  Eigen::Vector4d e1 = kernel.col(0).normalized();
  Eigen::Vector4d e2 = kernel.col(1) - kernel.col(1).dot(e1) * e1;
  e2.normalize();
  std::array<Vec2, 2> frame{Vec2(cd(e1(0), e1(1)), cd(e1(2), e1(3))), Vec2(cd(e2(0), e2(1)), cd(e2(2), e2(3)))};
  if (edge_orientation(r1, r2, z, frame) < 0) frame[1] = -frame[1];
  return frame;
}

cd simplex_integral(std::span<const cd> tau, int n, SimplexMode mode, int order) {
  if ((n != 2 && n != 3) || tau.size() != static_cast<std::size_t>(n))
    throw InputError("simplex_integral: n must be 2 or 3 with n entries of tau");
  for (const cd& t : tau)
    if (std::abs(1.0 - t) < 1e-14) throw PoleError("simplex_integral: some tau_j equals 1");
  if (mode == SimplexMode::closed) {
    cd prod = 1.0;
    for (const cd& t : tau) prod /= 1.0 - t;
    return (n == 2 ? 1.0 : -0.5) * prod;
  }
  auto linear = [&](std::span<const double> w) {
    cd s = 1.0;
    for (int j = 0; j < n; ++j) s -= tau[j] * w[j];
    return s;
  };
  // 1 - <tau, w> is affine in w; sample a lattice for its distance from 0.
  const int grid = 64;
  double distance = std::numeric_limits<double>::infinity();
  for (int a = 0; a <= grid; ++a)
    for (int b = 0; b <= (n == 3 ? grid - a : 0); ++b) {
      std::array<double, 3> w{};
      w[0] = static_cast<double>(a) / grid;
      if (n == 2) {
        w[1] = 1.0 - w[0];
      } else {
        w[1] = static_cast<double>(b) / grid;
        w[2] = 1.0 - w[0] - w[1];
      }
      distance = std::min(distance, std::abs(linear(w)));
    }
  if (distance < 1e-6) {
    std::ostringstream os;
    os << "simplex_integral: integrand pole within " << distance << " of the simplex";
    throw PoleError(os.str());
  }
  auto f = [&](std::span<const double> w) {
    const cd s = linear(w);
    return n == 2 ? 1.0 / (s * s) : 1.0 / (s * s * s);
  };
  return integrate_simplex(f, n, order).value;
}

PushforwardReport pushforward_corner_check(const PwsDomain& d, const Edge& e, const Vec2& z, const Vec2& tau,
                                           int order) {
  if (e.members.size() != 2) throw InputError("pushforward_corner_check: expected a 2-dimensional edge");
  const HermitianPoly& r1 = d.hypersurfaces.at(e.members[0]).rho;
  const HermitianPoly& r2 = d.hypersurfaces.at(e.members[1]).rho;
  const auto frame = edge_tangent_frame(d, e.members, z);
  const HomVec zh = HomVec::affine_point(z);
  const HomVec th = HomVec::affine_point(tau);
  const HomVec w1 = gradient_hyperplane(r1, z);
  const HomVec w2 = gradient_hyperplane(r2, z);
  std::array<IncidenceTangent, 2> lift1, lift2;
  for (int i = 0; i < 2; ++i) {
    lift1[i] = gauss_lift(r1, z, frame[i]);
    lift2[i] = gauss_lift(r2, z, frame[i]);
  }

  const GaussRule& rule = gauss_legendre(order);
  CompensatedSum acc;
  for (int q = 0; q < order; ++q) {
    const double t = 0.5 * (rule.nodes[q] + 1.0);
    const HomVec w(t * w1.coords() + (1.0 - t) * w2.coords(), Role::hyperplane);
    const cd p = pair(th, w);
    if (std::abs(p) <= 1e-12 * w.coords().norm())
      throw PoleError("pushforward_corner_check: fiber integrand has a pole");
    std::array<IncidenceTangent, 3> vecs;
    vecs[0] = {Vec3::Zero(), w1.coords() - w2.coords()};
    for (int i = 0; i < 2; ++i)
      vecs[i + 1] = {lift1[i].dz, t * lift1[i].dw + (1.0 - t) * lift2[i].dw};
    const cd omega = omega_cfl(zh, w, vecs, 0, largest_index(w.coords())).value;
    acc.add(0.5 * rule.weights[q] * omega / (p * p));
  }
  PushforwardReport report;
  report.fiber_value = acc.value();
  const std::array<HomVec, 2> strong{w1, w2};
  report.closed_value = corner_kernel(zh, strong, th, frame).value;
  report.deviation = std::abs(report.fiber_value - report.closed_value) / std::abs(report.closed_value);
  return report;
}

}  // namespace projhardy
