#pragma once

// Homogeneous coordinates on CP^2 and its dual, projective maps with unit
// determinant, and sections of the bundles O(j,k).

#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace projhardy {

using cd = std::complex<double>;
using Vec2 = Eigen::Vector2cd;
using Vec3 = Eigen::Vector3cd;
using Mat2 = Eigen::Matrix2cd;
using Mat3 = Eigen::Matrix3cd;

inline constexpr double kPi = 3.14159265358979323846;
inline const cd kTwoPiI{0.0, 2.0 * kPi};

/// Malformed input: bad text, bad JSON, role mismatch.
class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A precondition of a numerical operation is violated (pole, degenerate
/// gradient, point off the boundary, ...).
class PreconditionError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Kernel denominator vanishes at the requested evaluation point.
class PoleError : public PreconditionError {
public:
  using PreconditionError::PreconditionError;
};

enum class Role { point, hyperplane };

/// A point of CP^2 or a line of the dual plane, in homogeneous coordinates.
class HomVec {
public:
  HomVec(const Vec3& coords, Role role);
  HomVec(cd c0, cd c1, cd c2, Role role) : HomVec(Vec3(c0, c1, c2), role) {}

  static HomVec point(cd c0, cd c1, cd c2) { return {c0, c1, c2, Role::point}; }
  static HomVec hyperplane(cd c0, cd c1, cd c2) { return {c0, c1, c2, Role::hyperplane}; }
  /// [1 : z1 : z2]
  static HomVec affine_point(const Vec2& z) { return point(1.0, z(0), z(1)); }

  const Vec3& coords() const { return coords_; }
  cd operator[](int i) const { return coords_(i); }
  Role role() const { return role_; }

  /// Representative with the largest-modulus coordinate equal to 1.
  HomVec normalized() const;
  /// (z1/z0, z2/z0); throws PreconditionError when z0 == 0.
  Vec2 affine() const;

private:
  Vec3 coords_;
  Role role_;
};

/// Equal as points of projective space, within a relative tolerance on the
/// max-normalized coordinates.
bool projectively_equal(const HomVec& a, const HomVec& b, double tol = 1e-10);

/// Incidence pairing sum_j w_j z_j.
cd pair(const HomVec& z, const HomVec& w);

/// Projective transformation with det(matrix) = 1. Acts on points by
/// z -> M z (column convention).
class ProjMap {
public:
  ProjMap() : m_(Mat3::Identity()) {}

  const Mat3& matrix() const { return m_; }

  HomVec apply(const HomVec& z) const;
  /// Affine action (M10 + M11 z1 + M12 z2, ...)/(M00 + M01 z1 + M02 z2).
  Vec2 apply_affine(const Vec2& z) const;
  /// M00 + M01 z1 + M02 z2; the factor in the pullback law.
  cd denominator(const Vec2& z) const;
  /// Complex Jacobian of the affine action at z.
  Mat2 jacobian(const Vec2& z) const;
  /// Pushes a real tangent vector (as a complex 2-vector) forward.
  Vec2 push_forward(const Vec2& z, const Vec2& v) const { return jacobian(z) * v; }

  ProjMap inverse() const;
  ProjMap operator*(const ProjMap& rhs) const;

private:
  friend ProjMap normalize_map(const Mat3& m);
  explicit ProjMap(const Mat3& m) : m_(m) {}
  Mat3 m_;
};

/// Scales M so that det = 1, using the principal cube root of det(M).
/// Throws InputError for a singular matrix.
ProjMap normalize_map(const Mat3& m);

/// The transpose-inverse, acting on hyperplanes.
ProjMap dual_map(const ProjMap& t);

/// Applies T to a point or, through dual_map, to a hyperplane.
HomVec transform(const ProjMap& t, const HomVec& v);

/// Exact rational number; bundle exponents may be half-integers.
struct Rational {
  long num = 0;
  long den = 1;

  constexpr Rational() = default;
  constexpr Rational(long n, long d = 1) : num(n), den(d) {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool is_integer() const { return den == 1; }
  friend bool operator==(const Rational&, const Rational&) = default;
};

struct Bidegree {
  Rational j;
  Rational k;
  friend bool operator==(const Bidegree&, const Bidegree&) = default;
};

/// z^n for integer n (negative allowed), by repeated multiplication.
cd ipow(cd z, int n);

/// lambda^j * conj(lambda)^k. Half-integer exponents use the principal branch
/// of arg(lambda); only the modulus is chart independent for those.
cd bundle_factor(cd lambda, const Bidegree& b);

/// Value of a section of O(j,k) at a homogeneous basepoint.
struct SectionValue {
  cd value;
  Bidegree bidegree;
  HomVec basepoint;

  /// The same section value seen from the representative lambda * basepoint.
  SectionValue rescaled(cd lambda) const;
};

/// (T^* f)(z) = den^j conj(den)^k f(T(z)) for f a section of O(j,k) given in
/// the affine chart z0 = 1. Throws PreconditionError on the pole line of T.
template <class F>
SectionValue pull_back_section(const ProjMap& t, const F& f, const Bidegree& b, const Vec2& z) {
  const cd den = t.denominator(z);
  if (std::abs(den) < 1e-300)
    throw PreconditionError("pull_back_section: point lies on the pole line of the map");
  const cd value = bundle_factor(den, b) * f(t.apply_affine(z));
  return {value, b, HomVec::affine_point(z)};
}

}  // namespace projhardy
