#include "projhardy/projective.hpp"

#include <cmath>

namespace projhardy {

HomVec::HomVec(const Vec3& coords, Role role) : coords_(coords), role_(role) {
  if (coords.cwiseAbs().maxCoeff() == 0.0)
    throw InputError("HomVec: all homogeneous coordinates vanish");
}

HomVec HomVec::normalized() const {
  Eigen::Index imax = 0;
  coords_.cwiseAbs().maxCoeff(&imax);
  return {coords_ / coords_(imax), role_};
}

Vec2 HomVec::affine() const {
  if (std::abs(coords_(0)) == 0.0)
    throw PreconditionError("HomVec::affine: point at infinity (z0 = 0)");
  return {coords_(1) / coords_(0), coords_(2) / coords_(0)};
}

bool projectively_equal(const HomVec& a, const HomVec& b, double tol) {
  if (a.role() != b.role()) return false;
  const Vec3 na = a.normalized().coords();
  // Normalize b on the same index so the two representatives are comparable.
  Eigen::Index imax = 0;
  a.coords().cwiseAbs().maxCoeff(&imax);
  if (std::abs(b[imax]) == 0.0) return false;
  const Vec3 nb = b.coords() / b[imax];
  return (na - nb).cwiseAbs().maxCoeff() <= tol;
}

cd pair(const HomVec& z, const HomVec& w) {
  if (z.role() != Role::point || w.role() != Role::hyperplane)
    throw InputError("pair: expected (point, hyperplane)");
  return w.coords().transpose() * z.coords();
}

HomVec ProjMap::apply(const HomVec& z) const {
  if (z.role() != Role::point) throw InputError("ProjMap::apply: expected a point");
  return {m_ * z.coords(), Role::point};
}

cd ProjMap::denominator(const Vec2& z) const { return m_(0, 0) + m_(0, 1) * z(0) + m_(0, 2) * z(1); }

Vec2 ProjMap::apply_affine(const Vec2& z) const {
  const Vec3 h = m_ * Vec3(1.0, z(0), z(1));
  if (std::abs(h(0)) < 1e-300) throw PreconditionError("ProjMap: point maps to infinity");
  return {h(1) / h(0), h(2) / h(0)};
}

Mat2 ProjMap::jacobian(const Vec2& z) const {
  const Vec3 h = m_ * Vec3(1.0, z(0), z(1));
  const cd d = h(0);
  Mat2 jac;
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k)
      jac(i, k) = (m_(i + 1, k + 1) * d - h(i + 1) * m_(0, k + 1)) / (d * d);
  return jac;
}

ProjMap ProjMap::inverse() const { return normalize_map(m_.inverse()); }

ProjMap ProjMap::operator*(const ProjMap& rhs) const { return normalize_map(m_ * rhs.m_); }

ProjMap normalize_map(const Mat3& m) {
  const cd det = m.determinant();
  const double scale = m.cwiseAbs().maxCoeff();
  if (std::abs(det) <= 1e-14 * scale * scale * scale)
    throw InputError("normalize_map: singular matrix");
  const cd root = std::pow(det, 1.0 / 3.0);  // principal branch
  return ProjMap(m / root);
}

ProjMap dual_map(const ProjMap& t) { return normalize_map(t.matrix().inverse().transpose()); }

HomVec transform(const ProjMap& t, const HomVec& v) {
  if (v.role() == Role::point) return t.apply(v);
  return {dual_map(t).matrix() * v.coords(), Role::hyperplane};
}

cd ipow(cd z, int n) {
  cd result = 1.0;
  cd base = n < 0 ? 1.0 / z : z;
  for (unsigned e = static_cast<unsigned>(n < 0 ? -n : n); e != 0; e >>= 1) {
    if (e & 1u) result *= base;
    base *= base;
  }
  return result;
}

cd bundle_factor(cd lambda, const Bidegree& b) {
  if (b.j.is_integer() && b.k.is_integer())
    return ipow(lambda, static_cast<int>(b.j.num)) * ipow(std::conj(lambda), static_cast<int>(b.k.num));
  const double modulus = std::pow(std::abs(lambda), b.j.value() + b.k.value());
  const double phase = (b.j.value() - b.k.value()) * std::arg(lambda);
  return std::polar(modulus, phase);
}

SectionValue SectionValue::rescaled(cd lambda) const {
  return {value * bundle_factor(lambda, bidegree), bidegree, HomVec(basepoint.coords() * lambda, basepoint.role())};
}

}  // namespace projhardy
