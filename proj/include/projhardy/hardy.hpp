#pragma once

// Boundary measure (Fefferman on faces, eta^(1/3) |z0^3 dz| on edges), the
// Hardy norm of sections of O(-2,0), and the reproducing formula.

#include <vector>

#include "projhardy/edge_invariants.hpp"
#include "projhardy/kernels.hpp"

namespace projhardy {

/// Holomorphic section of O(-2,0) given by a polynomial F in the chart
/// z0 = 1, optionally transported by a projective map: the transported
/// section is den_{T^-1}(zeta)^-2 F(T^-1 zeta), so that T^* of it is F.
class Section {
public:
  explicit Section(Poly f);
  cd operator()(const Vec2& z) const;
  Section transported(const ProjMap& t) const;

private:
  Poly f_;
  ProjMap to_base_;  // current coordinates -> coordinates of F
  bool placed_ = false;
};

/// det [[0, rho_zbar^T], [rho_z, (rho_{z_k zbar_l})]].
cd bordered_levi_determinant(const HermitianPoly& rho, const Vec2& z);

/// Density of the Fefferman measure on three tangent vectors of {rho = 0}:
/// 2^(4/3) |J|^(1/3) |det(v1, v2, v3, nu)| / |grad rho|, nu the unit normal.
/// Zero on Levi-flat points. Throws PreconditionError where the gradient
/// vanishes or the Levi form is negative on the complex tangent line.
double fefferman_density(const HermitianPoly& rho, const Vec2& z, std::span<const Vec2> frame);

/// eta^(1/3) |dz(v1, v2)| in the chart z0 = 1. Throws PreconditionError for
/// eta < 0.
double edge_measure_density(double eta_weight, std::span<const Vec2> frame);
double edge_measure_density(const PwsDomain& d, std::span<const int> members, const Vec2& z,
                            std::span<const Vec2> frame, double fit_radius = 1e-2);

/// Quadrature resolution: points per axis on faces and on edges.
struct Resolution {
  int faces = 32;
  int edges = 64;
};

/// The measure mu = Fefferman on faces + eta^(1/3)|z0^3 dz| on 2-dimensional
/// edges of a fixed domain.
class BoundaryMeasure {
public:
  explicit BoundaryMeasure(const PwsDomain& d, double fit_radius = 1e-2) : d_(&d), fit_radius_(fit_radius) {}
  double face_density(std::size_t face, const ChartPoint& p) const;
  double edge_density(std::size_t edge, const ChartPoint& p) const;
  const PwsDomain& domain() const { return *d_; }

private:
  const PwsDomain* d_;
  double fit_radius_;
};

struct NormReport {
  double norm_squared = 0.0;  ///< sum of the pieces
  double faces = 0.0;
  double edges = 0.0;
  double error_estimate = 0.0;  ///< |value - value at half resolution|
};

/// ||f||^2 = integral of |f|^2 d mu over faces and 2-dimensional edges.
NormReport hardy_norm(const Section& f, const BoundaryMeasure& mu, const Resolution& res);

/// Boundary inner products <f_i, f_j> = integral of f_i conj(f_j) d mu.
Eigen::MatrixXcd gram_matrix(const std::vector<Section>& sections, const BoundaryMeasure& mu, const Resolution& res);

struct ReproduceReport {
  cd value;
  cd expected;
  std::vector<cd> faces;  ///< one entry per face
  std::vector<cd> edges;  ///< one entry per edge
  cd faces_total;
  cd edges_total;
  double rel_err = 0.0;
  double error_estimate = 0.0;
};

/// Sum of the Leray integrals over faces and the corner-kernel integrals over
/// 2-dimensional edges, against f, at the interior point tau. Throws
/// PreconditionError if tau is not interior and PoleError at a kernel pole.
ReproduceReport reproduce(const Section& f, const Vec2& tau, const PwsDomain& d, const Resolution& res);

}  // namespace projhardy
