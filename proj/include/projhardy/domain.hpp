#pragma once

// Piecewise-smooth domains in the affine chart z0 = 1: boundary hypersurfaces
// with polynomial defining functions, 3-dimensional faces and 2-dimensional
// edges with explicit parameter charts, and the tangent/convexity utilities
// that operate on them.

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "projhardy/poly.hpp"
#include "projhardy/quadrature.hpp"

namespace projhardy {

/// A chart point with the real tangent vectors d z / d param_i (as complex
/// 2-vectors).
struct ChartPoint {
  Vec2 z;
  std::vector<Vec2> tangents;
};

/// Parameter chart of a face or an edge. Points are obtained from the
/// chart's own constraints by Newton's method in base coordinates and then
/// carried to the current coordinates by the placement map.
class Chart {
public:
  virtual ~Chart() = default;

  virtual std::vector<Axis> axes() const = 0;
  ChartPoint evaluate(std::span<const double> params) const;

  const nlohmann::json& spec() const { return spec_; }
  const ProjMap& placement() const { return placement_; }
  /// Same chart composed with t.
  std::shared_ptr<const Chart> placed(const ProjMap& t) const;

protected:
  Chart(nlohmann::json spec, std::vector<HermitianPoly> constraints)
      : spec_(std::move(spec)), constraints_(std::move(constraints)) {}

  /// Ansatz z(p, s) with its partial derivatives; s are the unknowns fixed
  /// by the constraints.
  struct Ansatz {
    Vec2 z;
    std::vector<Vec2> dp;
    std::vector<Vec2> ds;
  };
  virtual Ansatz ansatz(std::span<const double> params, std::span<const double> unknowns) const = 0;
  virtual std::vector<double> initial_unknowns(std::span<const double> params) const = 0;
  virtual std::shared_ptr<Chart> clone() const = 0;

private:
  ChartPoint evaluate_base(std::span<const double> params) const;

  nlohmann::json spec_;
  std::vector<HermitianPoly> constraints_;
  ProjMap placement_;
};

/// Builds a chart from its JSON description. constraints are the defining
/// functions that vanish on the piece (one for a face, two for an edge).
/// Catalog: torus2, sphere_polar, graph_patch, reinhardt_face.
std::shared_ptr<const Chart> make_chart(const nlohmann::json& spec, std::vector<HermitianPoly> constraints);

struct Hypersurface {
  std::string label;
  HermitianPoly rho;
};

struct Face {
  int hypersurface = 0;
  std::shared_ptr<const Chart> chart;
};

struct Edge {
  std::vector<int> members;
  std::shared_ptr<const Chart> chart;
};

/// Omega = {all rho < 0} (intersection) or {some rho < 0} (union).
enum class Combination { intersection, union_of };

struct PwsDomain {
  std::vector<Hypersurface> hypersurfaces;
  std::vector<Face> faces;
  std::vector<Edge> edges;
  std::vector<Vec2> interior_points;
  Combination combination = Combination::intersection;

  int index_of(const std::string& label) const;
  bool contains(const Vec2& z) const;
  /// Image of the domain under t: polynomials transformed, charts placed,
  /// interior points mapped.
  PwsDomain transformed(const ProjMap& t) const;
};

/// Real coordinates (x1, y1, x2, y2) of a complex 2-vector.
Eigen::Vector4d as_real(const Vec2& v);

/// +1 if (nu, v1, v2, v3) is positively oriented in (x1, y1, x2, y2), nu the
/// outward normal of {rho = 0}; -1 otherwise. This is the boundary
/// orientation of a face frame.
double face_orientation(const HermitianPoly& rho, const Vec2& z, std::span<const Vec2> frame);

/// Orientation of an edge frame (v1, v2) relative to the members in listed
/// order: +1 iff det(nu1, nu2, v1, v2) < 0.
double edge_orientation(const HermitianPoly& rho1, const HermitianPoly& rho2, const Vec2& z,
                        std::span<const Vec2> frame);

/// Hypersurfaces whose |rho(z)| is below tol, in index order.
std::vector<int> active_members(const PwsDomain& d, const Vec2& z, double tol = 1e-8);

/// One gradient hyperplane per member of the edge.
std::vector<HomVec> strong_tangents(const PwsDomain& d, const Edge& e, const Vec2& z);

/// [-sum t_l <d rho_l, z> : sum t_l d rho_l] for barycentric t.
HomVec weak_tangent(const PwsDomain& d, const Edge& e, const Vec2& z, std::span<const double> t);
HomVec weak_tangent(const PwsDomain& d, std::span<const int> members, const Vec2& z, std::span<const double> t);

/// Gauss-Newton projection of z onto {rho_j = 0 for j in members}.
Vec2 project_to_edge(const PwsDomain& d, std::span<const int> members, const Vec2& z, double tol = 1e-12);

struct LocalIntersectionReport {
  bool pass = true;
  std::vector<int> members;
  long samples = 0;
  long mismatches = 0;
};

/// Samples the ball B(z, radius) and compares membership in the domain with
/// membership in the intersection of the sublevel sets of the members active
/// at z. Throws PreconditionError if a non-member changes sign in the ball.
LocalIntersectionReport check_local_intersection(const PwsDomain& d, const Vec2& z, double radius, int samples,
                                                 unsigned seed = 1);

struct StrictnessReport {
  double margin = 0.0;  ///< min over lines and samples of max_l rho_l / |zeta|^2
  bool avoids = false;  ///< margin >= -tol
  bool strict = false;  ///< margin > tol
  std::vector<double> t_values;
  std::vector<double> line_margins;
};

/// Samples the weak-tangent lines z + zeta v, v spanning ker w(t), over the
/// annulus 0 < |zeta| <= radius (radius 1 when none is given).
StrictnessReport check_strict_convexity(const PwsDomain& d, const Vec2& z, int t_grid, int ambient_grid,
                                        std::optional<double> local_radius, double tol = 1e-9);

struct ValidationIssue {
  std::string hypersurface;
  std::string message;
};

/// Samples every chart and interior point: constraint residuals, signs of
/// non-members, complex transversality on edges, and orientation (rho < 0
/// at interior points and just inside each face).
std::vector<ValidationIssue> validate_domain(const PwsDomain& d, int samples_per_axis = 5);

}  // namespace projhardy
