#include "projhardy/edge_invariants.hpp"

#include <cmath>

namespace projhardy {

double NormalForm::max_abs_diff(const NormalForm& o) const {
  return std::max({std::abs(a1 - o.a1), std::abs(b1 - o.b1), std::abs(c1 - o.c1), std::abs(a2 - o.a2),
                   std::abs(b2 - o.b2), std::abs(c2 - o.c2)});
}

NormalForm apply_coordinate_change(const NormalForm& nf, ChangeKind kind, cd param) {
  const auto [a1, b1, c1, a2, b2, c2] = nf;
  switch (kind) {
    case ChangeKind::shift: {
      const double s = param.imag();
      return {a1 + s, b1, c1, a2, b2 + s, c2};
    }
    case ChangeKind::scale: {
      const double r = param.real();
      if (param.imag() != 0.0 || r <= 0.0) throw InputError("scale change needs a real r > 0");
      return {a1 * r, b1, c1 / r, a2, b2 * r, c2 * r * r};
    }
    case ChangeKind::swap:
      return {a2, b2, c2, a1, b1, c1};
    case ChangeKind::shear: {
      const double r = param.real();
      if (param.imag() != 0.0) throw InputError("shear change needs a real r");
      return {a1 + r * b1 + r * r * c1,
              b1 + 2 * r * c1,
              c1,
              a2 - r * c1,
              b2 + 2 * r * a2 - r * b1 - 2 * r * r * c1,
              c2 + r * (b2 - a1) + r * r * (a2 - b1) - r * r * r * c1};
    }
  }
  throw InputError("unknown coordinate change");
}

ProjMap coordinate_change_matrix(ChangeKind kind, cd param) {
  Mat3 m = Mat3::Identity();
  switch (kind) {
    case ChangeKind::shift:
      m(0, 1) = param;
      break;
    case ChangeKind::scale:
      m(1, 1) = param;
      break;
    case ChangeKind::swap:
      m << 1, 0, 0, 0, 0, 1, 0, 1, 0;
      break;
    case ChangeKind::shear:
      m(2, 1) = param;
      break;
  }
  return normalize_map(m);
}

ProjMap edge_frame(const PwsDomain& d, std::span<const int> members, const Vec2& p) {
  if (members.size() != 2) throw InputError("edge_frame: expected a 2-dimensional edge");
  Mat2 a;
  for (int j = 0; j < 2; ++j) {
    const Vec2 g = d.hypersurfaces.at(members[j]).rho.dz(p);
    if (g.norm() == 0.0) throw PreconditionError("edge_frame: vanishing gradient");
    a.row(j) = cd(0.0, 1.0) * g.transpose() / g.norm();
  }
  if (std::abs(a.determinant()) <= 1e-10) throw PreconditionError("edge_frame: gradients are parallel over C");
  Mat3 m = Mat3::Zero();
  m(0, 0) = 1.0;
  m.block<2, 2>(1, 1) = a;
  m.block<2, 1>(1, 0) = -a * p;
  return normalize_map(m);
}

namespace {

constexpr int kFitDegree = 8;

struct SingleFit {
  NormalForm nf;
  double residual;
};

SingleFit fit_once(const HermitianPoly& r1, const HermitianPoly& r2, double h) {
  const int radii = 8, angles = 20;
  std::vector<std::array<double, 2>> xs;
  std::vector<std::array<double, 2>> ys;
  const std::array<const HermitianPoly*, 2> polys{&r1, &r2};
  const std::array<Vec2, 2> dirs{Vec2(cd(0, 1), 0.0), Vec2(0.0, cd(0, 1))};
  for (int k = 0; k < angles; ++k) {
    const double phi = 2.0 * kPi * k / angles;
    Eigen::Vector2d y = Eigen::Vector2d::Zero();
    double r_prev = 0.0;
    for (int i = 0; i < radii; ++i) {
      const double r = h * (i + 1.0) / radii;
      const Eigen::Vector2d x(r * std::cos(phi), r * std::sin(phi));
      if (r_prev > 0.0) y *= (r / r_prev) * (r / r_prev);  // quadratic extrapolation along the ray
      r_prev = r;
      for (int iter = 0;; ++iter) {
        const Vec2 zeta(cd(x(0), y(0)), cd(x(1), y(1)));
        Eigen::Vector2d f;
        Eigen::Matrix2d jac;
        for (int j = 0; j < 2; ++j) {
          f(j) = polys[j]->eval(zeta);
          for (int l = 0; l < 2; ++l) jac(j, l) = polys[j]->directional(zeta, dirs[l]);
        }
        const Eigen::Vector2d step = jac.partialPivLu().solve(f);
        y -= step;
        if (step.cwiseAbs().maxCoeff() <= 1e-17 + 1e-15 * y.cwiseAbs().maxCoeff()) break;
        if (iter > 50) throw PreconditionError("fit_normal_form: edge is not a graph over R^2 near 0");
      }
      xs.push_back({x(0), x(1)});
      ys.push_back({y(0), y(1)});
    }
  }
  std::vector<std::array<int, 2>> monomials;
  for (int deg = 1; deg <= kFitDegree; ++deg)
    for (int p = deg; p >= 0; --p) monomials.push_back({p, deg - p});
  Eigen::MatrixXd design(xs.size(), monomials.size());
  Eigen::MatrixXd rhs(xs.size(), 2);
  for (std::size_t s = 0; s < xs.size(); ++s) {
    for (std::size_t m = 0; m < monomials.size(); ++m)
      design(s, m) = std::pow(xs[s][0] / h, monomials[m][0]) * std::pow(xs[s][1] / h, monomials[m][1]);
    rhs(s, 0) = ys[s][0];
    rhs(s, 1) = ys[s][1];
  }
  const auto qr = design.colPivHouseholderQr();
  if (qr.rank() < static_cast<Eigen::Index>(monomials.size()))
    throw PreconditionError("fit_normal_form: rank-deficient sample set");
  const Eigen::MatrixXd coef = qr.solve(rhs);
  auto quad = [&](int col, int p) {
    for (std::size_t m = 0; m < monomials.size(); ++m)
      if (monomials[m][0] == p && monomials[m][1] == 2 - p) return coef(m, col) / (h * h);
    return 0.0;
  };
  SingleFit out;
  out.nf = {quad(0, 2), quad(0, 1), quad(0, 0), quad(1, 0), quad(1, 1), quad(1, 2)};
  out.residual = std::sqrt((design * coef - rhs).squaredNorm() / xs.size());
  return out;
}

}  // namespace

NormalFormFit fit_normal_form(const HermitianPoly& r1, const HermitianPoly& r2, double h) {
  if (!(h > 0.0)) throw InputError("fit_normal_form: radius must be positive");
  const SingleFit coarse = fit_once(r1, r2, h);
  const SingleFit fine = fit_once(r1, r2, 0.5 * h);
  NormalFormFit out{coarse.nf, coarse.residual, coarse.nf.max_abs_diff(fine.nf)};
  if (out.drift > 1e-4)
    throw PreconditionError("fit_normal_form: coefficients drift by " + std::to_string(out.drift) +
                            " between radii h and h/2");
  return out;
}

NormalFormFit extract_normal_form(const PwsDomain& d, std::span<const int> members, const Vec2& p, double h) {
  const ProjMap frame = edge_frame(d, members, p);
  const HermitianPoly r1 = transform_poly(d.hypersurfaces.at(members[0]).rho, frame);
  const HermitianPoly r2 = transform_poly(d.hypersurfaces.at(members[1]).rho, frame);
  return fit_normal_form(r1, r2, h);
}

Normalization normalize_coeffs(const NormalForm& nf) {
  if (!(nf.c1 < 0.0) || !(nf.c2 < 0.0))
    throw PreconditionError("normalize_coeffs: c1 and c2 must be negative (strong C-convexity fails)");
  Normalization out;
  out.nf = nf;
  auto step = [&](ChangeKind kind, cd param) {
    out.nf = apply_coordinate_change(out.nf, kind, param);
    out.steps.push_back({kind, param});
    out.map = coordinate_change_matrix(kind, param) * out.map;
  };
  if (out.nf.a1 != 0.0) step(ChangeKind::shift, cd(0.0, -out.nf.a1));
  if (out.nf.a2 != 0.0) {
    step(ChangeKind::swap, 0.0);
    step(ChangeKind::shift, cd(0.0, -out.nf.a1));
    step(ChangeKind::swap, 0.0);
  }
  const double C1 = -out.nf.c1, C2 = -out.nf.c2;
  const double r = std::cbrt(1.0 / (C1 * C2 * C2));
  const double s = C2 * r * r;
  if (r != 1.0) step(ChangeKind::scale, r);
  if (s != 1.0) {
    step(ChangeKind::swap, 0.0);
    step(ChangeKind::scale, s);
    step(ChangeKind::swap, 0.0);
  }
  if (out.nf.b1 > out.nf.b2) step(ChangeKind::swap, 0.0);
  return out;
}

double legendre_profile(double t) { return 4.0 / (1.0 - t * t) - 3.0; }

double legendre_profile_quotient(double t) {
  const double u = 0.5 * (t + 1.0);
  const double v = 0.5 * (1.0 - t);  // (s + 1)/2 with s = -t
  return (u * u * u + v * v * v) / (u * v);
}

LegendreValue legendre_transform(double p) {
  // Solve f'(t) = 8 t / (1 - t^2)^2 = p, f' increasing on (-1, 1).
  auto fprime = [](double t) {
    const double q = 1.0 - t * t;
    return 8.0 * t / (q * q);
  };
  auto fsecond = [](double t) {
    const double q = 1.0 - t * t;
    return 8.0 * (1.0 + 3.0 * t * t) / (q * q * q);
  };
  double lo = -1.0, hi = 1.0, t = 0.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double g = fprime(t) - p;
    if (g > 0.0)
      hi = t;
    else
      lo = t;
    double next = t - g / fsecond(t);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - t) <= 1e-15 || hi - lo <= 1e-15) {
      t = next;
      break;
    }
    t = next;
  }
  return {p * t - legendre_profile(t), t};
}

double legendre_f(double p) { return legendre_transform(p).value; }

double kappa(double b1, double b2) { return 0.5 * (b1 + b2) - legendre_f(0.5 * std::abs(b2 - b1)); }

bool legendre_inequality_holds(double b1, double b2, int grid) {
  for (int i = 0; i < grid; ++i) {
    const double t = -1.0 + 2.0 * (i + 0.5) / grid;
    if (!(-0.5 * (1.0 + t) * b1 - 0.5 * (1.0 - t) * b2 < legendre_profile(t))) return false;
  }
  return true;
}

EdgeInvariant eta(const PwsDomain& d, std::span<const int> members, const Vec2& p, double h) {
  const ProjMap frame = edge_frame(d, members, p);
  const HermitianPoly r1 = transform_poly(d.hypersurfaces.at(members[0]).rho, frame);
  const HermitianPoly r2 = transform_poly(d.hypersurfaces.at(members[1]).rho, frame);
  EdgeInvariant out;
  out.fit = fit_normal_form(r1, r2, h);
  out.frame_form = out.fit.nf;
  const Normalization norm = normalize_coeffs(out.frame_form);
  out.b1_norm = norm.nf.b1;
  out.b2_norm = norm.nf.b2;
  out.kappa = kappa(out.b1_norm, out.b2_norm);
  const double c1c2 = out.frame_form.c1 * out.frame_form.c2;
  // |det A| of the affine frame, read off the unit-determinant matrix.
  const cd m00 = frame.matrix()(0, 0);
  const double det_a = 1.0 / std::pow(std::abs(m00), 3);
  out.kappa_c1c2 = c1c2 * out.kappa;
  out.eta_weight = out.kappa / (det_a * c1c2);
  out.frame = norm.map * frame;
  return out;
}

}  // namespace projhardy
