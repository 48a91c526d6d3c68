#pragma once

// Second-order normal form of a 2-dimensional edge, its transformation laws
// under the edge stabilizer, the Legendre-transform invariant kappa, and the
// weight eta.

#include <span>
#include <vector>

#include "projhardy/domain.hpp"

namespace projhardy {

/// Along the edge, in coordinates where it passes through 0 tangent to R^2:
///   y1 = a1 x1^2 + b1 x1 x2 + c1 x2^2,
///   y2 = a2 x2^2 + b2 x1 x2 + c2 x1^2   (+ higher order).
struct NormalForm {
  double a1 = 0, b1 = 0, c1 = 0, a2 = 0, b2 = 0, c2 = 0;

  double max_abs_diff(const NormalForm& o) const;
};

/// Coordinate changes fixing the origin, written as maps z -> w:
///   shift  I_lambda: w = z / (1 + lambda z1)
///   scale  S_r:      w1 = r z1
///   swap   W:        w1 = z2, w2 = z1
///   shear  H_r:      w2 = r z1 + z2
enum class ChangeKind { shift, scale, swap, shear };

/// Coefficients of the edge in z coordinates, given those in w coordinates.
/// Throws InputError for r <= 0 with a scale, or a non-real shear.
NormalForm apply_coordinate_change(const NormalForm& nf, ChangeKind kind, cd param = 0.0);

/// The projective map z -> w of a coordinate change.
ProjMap coordinate_change_matrix(ChangeKind kind, cd param = 0.0);

/// Affine map zeta = A (z - p), rows of A equal to i g_j / |g_j| with g_j the
/// holomorphic gradient of the j-th member at p. The tangent cone of the
/// domain at p becomes {Im zeta_1 < 0, Im zeta_2 < 0}.
ProjMap edge_frame(const PwsDomain& d, std::span<const int> members, const Vec2& p);

struct NormalFormFit {
  NormalForm nf;
  double residual = 0.0;  ///< RMS of the least-squares residual
  double drift = 0.0;     ///< max coefficient change between radii h and h/2
};

/// Fits the normal form of {r1 = r2 = 0}, which must pass through 0 tangent
/// to R^2: y is solved for by Newton's method on a polar grid |x| <= h and
/// fitted by polynomials of degree 1..8. Throws PreconditionError if the
/// coefficients move by more than 1e-4 between h and h/2.
NormalFormFit fit_normal_form(const HermitianPoly& r1, const HermitianPoly& r2, double h = 1e-2);

/// edge_frame followed by fit_normal_form on the transformed members.
NormalFormFit extract_normal_form(const PwsDomain& d, std::span<const int> members, const Vec2& p, double h = 1e-2);

struct CoordinateStep {
  ChangeKind kind;
  cd param;
};

struct Normalization {
  NormalForm nf;
  std::vector<CoordinateStep> steps;  ///< in the order applied
  ProjMap map;                        ///< product of the step matrices, first step rightmost
};

/// Two imaginary shifts (a1 = a2 = 0), two scalings (c1 = c2 = -1), then a
/// swap if needed so that b1 <= b2. Throws PreconditionError unless c1, c2 < 0.
Normalization normalize_coeffs(const NormalForm& nf);

/// f(t) = 4 / (1 - t^2) - 3 on (-1, 1), and the original quotient form.
double legendre_profile(double t);
double legendre_profile_quotient(double t);

struct LegendreValue {
  double value;   ///< sup_t (p t - f(t))
  double argmax;  ///< maximizing t
};
LegendreValue legendre_transform(double p);
double legendre_f(double p);

/// (b1 + b2)/2 - L((b2 - b1)/2).
double kappa(double b1, double b2);

/// Whether -((1+t)/2) b1 - ((1-t)/2) b2 < f(t) at every point of a uniform
/// grid of (-1, 1).
bool legendre_inequality_holds(double b1, double b2, int grid = 1000);

struct EdgeInvariant {
  double kappa = 0.0;
  /// kappa / (|det A| c1 c2) with the frame coefficients: the weight of eta in
  /// the chart z0 = 1 at the basepoint.
  double eta_weight = 0.0;
  /// c1 c2 kappa with the frame coefficients.
  double kappa_c1c2 = 0.0;
  double b1_norm = 0.0, b2_norm = 0.0;
  NormalForm frame_form;
  NormalFormFit fit;
  ProjMap frame;  ///< normalization map composed with the edge frame
};

EdgeInvariant eta(const PwsDomain& d, std::span<const int> members, const Vec2& p, double h = 1e-2);

}  // namespace projhardy
