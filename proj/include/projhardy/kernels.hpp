#pragma once

// Cauchy-Fantappie-Leray kernels in C^2: the universal form on the incidence
// locus, the smooth Leray density of a face, the corner kernel of a
// 2-dimensional edge and its fiber-integral derivation, and the simplex
// integral behind it.

#include <span>
#include <vector>

#include "projhardy/domain.hpp"

namespace projhardy {

/// Value of a bundle-valued form on a frame.
struct Density {
  cd value;
  Bidegree z_bidegree;  ///< homogeneity in the point variable
  Bidegree w_bidegree;  ///< homogeneity in the dual (or second point) variable
  int form_degree = 0;
  std::vector<Eigen::VectorXcd> frame;
};

/// Tangent vector to the incidence locus {w . z = 0} in homogeneous
/// coordinates: w . dz + dw . z = 0.
struct IncidenceTangent {
  Vec3 dz;
  Vec3 dw;
};

/// The universal form evaluated through the chart z_j != 0, w_k != 0.
/// Throws PreconditionError when the chart does not contain the point and
/// InputError when (z, w) is not incident or the frame is not tangent.
Density omega_cfl(const HomVec& z, const HomVec& w, std::span<const IncidenceTangent> frame, int j = 0, int k = 0);

/// z0^2 w0^2 / (2 pi i)^2 (1 / z2_hat) dw1_hat ^ dz1_hat ^ dz2_hat, with the
/// affine dual coordinate w1_hat = -w1 / w0. Needs z0, z2, w0 != 0.
Density omega_affine_form(const HomVec& z, const HomVec& w, std::span<const IncidenceTangent> frame);

/// Leray density d rho ^ dbar d rho / ((2 pi i)^2 <d rho, z - tau>^2) on
/// three affine tangent vectors. Orientation is left to the caller.
Density smooth_leray_density(const HermitianPoly& rho, const Vec2& z, const Vec2& tau, std::span<const Vec2> frame);

/// Pulls the universal form back through the Gauss map z -> [-<d rho, z> : d rho]
/// and multiplies by 1 / <tau, w>^2; an independent route to the Leray density.
Density gauss_map_leray_density(const HermitianPoly& rho, const Vec2& z, const Vec2& tau, std::span<const Vec2> frame);

/// Determinant of the 2x2 minor of (w^1; w^2) obtained by deleting column i.
cd minor_det(const HomVec& w1, const HomVec& w2, int i);

/// det0(w) / (<tau, w^1> <tau, w^2>) z0^2 dz(v1, v2) / (2 pi i)^2 with the
/// frame given as affine tangent vectors.
Density corner_kernel(const HomVec& z, std::span<const HomVec> strong, const HomVec& tau, std::span<const Vec2> frame);

/// Oriented real basis of the edge tangent plane at z (edge_orientation +1).
std::array<Vec2, 2> edge_tangent_frame(const PwsDomain& d, std::span<const int> members, const Vec2& z);

enum class SimplexMode { closed, quadrature };

/// Integral of dw_[n] / (1 - <tau, w>)^n over the simplex, n in {2, 3}.
/// Quadrature mode throws PoleError when 1 - <tau, w> nearly vanishes on it.
cd simplex_integral(std::span<const cd> tau, int n, SimplexMode mode, int order = 64);

struct PushforwardReport {
  cd fiber_value;   ///< fiber integral of the universal form
  cd closed_value;  ///< corner_kernel on the same frame
  double deviation = 0.0;
};

/// Integrates 1/<tau, w(t)>^2 times the universal form over the weak-tangent
/// fiber w(t) = t w^1 + (1 - t) w^2, t from 0 to 1, and compares with the
/// corner kernel, both evaluated on the oriented edge frame at z.
PushforwardReport pushforward_corner_check(const PwsDomain& d, const Edge& e, const Vec2& z, const Vec2& tau,
                                           int order = 48);

}  // namespace projhardy
