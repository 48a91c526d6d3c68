#pragma once

// Polynomials in (z1, conj(z1), z2, conj(z2)) with exact Wirtinger calculus.
// Real-valued (Hermitian) polynomials serve as defining functions.

#include <array>
#include <map>
#include <string>
#include <string_view>

#include "projhardy/projective.hpp"

namespace projhardy {

/// Exponents (p1, q1, p2, q2) of z1^p1 conj(z1)^q1 z2^p2 conj(z2)^q2.
using Exponents = std::array<int, 4>;

enum class Wirtinger { dz1, dz2, dzbar1, dzbar2 };

class Poly {
public:
  Poly() = default;
  explicit Poly(cd constant);

  static Poly z(int index);      ///< z1 or z2 (index 1 or 2)
  static Poly zbar(int index);

  const std::map<Exponents, cd>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  void add_term(const Exponents& e, cd c);

  /// max(p1+p2) and max(q1+q2) over terms.
  int holomorphic_degree() const;
  int antiholomorphic_degree() const;
  bool is_holomorphic() const { return antiholomorphic_degree() == 0; }

  cd eval(const Vec2& z) const;
  Poly wirtinger(Wirtinger which) const;
  /// conj(p(z)) as a polynomial.
  Poly conjugate() const;

  Poly& operator+=(const Poly& rhs);
  Poly& operator-=(const Poly& rhs);
  Poly& operator*=(cd s);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(Poly a, cd s) { return a *= s; }
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly pow(int n) const;

  /// Canonical text in the parser grammar; parse(to_string()) reproduces it.
  std::string to_string() const;

private:
  void prune();
  std::map<Exponents, cd> terms_;
};

/// Real-valued polynomial: the coefficient of (p1,q1,p2,q2) is the conjugate
/// of the coefficient of (q1,p1,q2,p2). Derivatives are cached.
class HermitianPoly {
public:
  HermitianPoly() : HermitianPoly(Poly()) {}
  /// Throws InputError naming the offending term pair if p is not Hermitian.
  explicit HermitianPoly(const Poly& p);

  const Poly& poly() const { return p_; }
  double eval(const Vec2& z) const { return p_.eval(z).real(); }
  /// (rho_{z1}, rho_{z2})
  Vec2 dz(const Vec2& z) const;
  /// H(k, l) = rho_{z_k zbar_l}
  Mat2 levi(const Vec2& z) const;
  /// H(k, l) = rho_{z_k z_l}
  Mat2 hess_holo(const Vec2& z) const;
  /// Real gradient in coordinates (x1, y1, x2, y2).
  Eigen::Vector4d real_gradient(const Vec2& z) const;
  /// Derivative of rho along a real tangent vector v: 2 Re(dz . v).
  double directional(const Vec2& z, const Vec2& v) const;

  std::string to_string() const { return p_.to_string(); }

private:
  Poly p_;
  std::array<Poly, 2> d_;
  std::array<std::array<Poly, 2>, 2> levi_;
  std::array<std::array<Poly, 2>, 2> holo_;
};

Poly wirtinger(const Poly& p, Wirtinger which);

/// Thrown by the text parser; carries the byte offset of the problem.
class ParseError : public InputError {
public:
  ParseError(const std::string& what, std::size_t position);
  std::size_t position() const { return position_; }

private:
  std::size_t position_;
};

/// Parses a polynomial expression. Grammar: sums/differences of products of
/// numbers, complex literals (re,im), z1, z2, conj(z1), conj(z2), abs2(zk),
/// re(zk), im(zk), parenthesised sub-expressions, each optionally raised to
/// a non-negative integer power with '^'.
Poly parse_expression(std::string_view text);
/// parse_expression followed by the Hermitian-symmetry check.
HermitianPoly parse_poly(std::string_view text);
/// parse_expression, rejecting any conj(.) dependence.
Poly parse_holomorphic(std::string_view text);

/// [-(rho_{z1} z1 + rho_{z2} z2) : rho_{z1} : rho_{z2}]; the complex tangent
/// line of {rho = 0} at z. Throws PreconditionError if the gradient vanishes.
HomVec gradient_hyperplane(const HermitianPoly& rho, const Vec2& z);

/// Defining function of T(S) from one of S: rho(T^{-1} zeta) |D(zeta)|^{2d},
/// where D is the denominator of T^{-1} and d the degree of rho. The factor
/// is positive, so the zero set and sign are those of rho o T^{-1}. For
/// affine T no factor is introduced.
HermitianPoly transform_poly(const HermitianPoly& rho, const ProjMap& t);

}  // namespace projhardy
