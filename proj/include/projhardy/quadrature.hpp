#pragma once

// Tensor trapezoid rules on tori, tensor Gauss-Legendre rules on boxes, and
// collapsed-coordinate rules on simplices. Sums are compensated and taken in
// a fixed order, so results are reproducible bit for bit.

#include <functional>
#include <span>
#include <vector>

#include "projhardy/projective.hpp"

namespace projhardy {

struct QuadResult {
  cd value;
  double error_estimate = 0.0;  ///< |Q(N) - Q(N/2)|
  long nodes_used = 0;
};

using Integrand = std::function<cd(std::span<const double>)>;

/// One coordinate direction of a tensor rule.
struct Axis {
  enum class Kind { periodic, interval };
  Kind kind = Kind::interval;
  double lo = 0.0;
  double hi = 1.0;

  static Axis periodic(double length = 2.0 * kPi) { return {Kind::periodic, 0.0, length}; }
  static Axis interval(double lo, double hi) { return {Kind::interval, lo, hi}; }
};

/// Gauss-Legendre nodes and weights on [-1, 1]. Cached per order.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre(int order);

/// Neumaier-compensated complex accumulator.
class CompensatedSum {
public:
  void add(cd x);
  cd value() const { return {re_ + cre_, im_ + cim_}; }

private:
  static void step(double& sum, double& comp, double x);
  double re_ = 0.0, im_ = 0.0, cre_ = 0.0, cim_ = 0.0;
};

/// Calls visit(params, weight) for every node of the tensor rule below, in a
/// fixed order.
void for_each_tensor_node(std::span<const Axis> axes, int n,
                          const std::function<void(std::span<const double>, double)>& visit);

/// Tensor rule over the given axes with n points per axis (trapezoid on
/// periodic axes, Gauss-Legendre of order n on intervals). No error estimate.
cd tensor_sum(const Integrand& f, std::span<const Axis> axes, int n);

/// tensor_sum at n with the n/2 result as error estimate.
QuadResult integrate_tensor(const Integrand& f, std::span<const Axis> axes, int n);

/// Trapezoid rule on [0, 2pi)^dim, dim in {1, 2, 3}.
QuadResult integrate_periodic(const Integrand& f, int dim, int n);

/// Gauss-Legendre of the given order on a box.
QuadResult integrate_patch(const Integrand& f, std::span<const Axis> box, int order);

/// Oriented integral of f(w) dw_[n] over the simplex {w_j >= 0, sum w_j = 1}
/// in C^n, n in {2, 3}. f receives all n barycentric coordinates. The
/// orientation is (-1)^n times that of the coordinates (w_1, ..., w_{n-1});
/// for n = 3 the triangle is collapsed by w_1 = u, w_2 = (1 - u) v.
QuadResult integrate_simplex(const Integrand& f, int n, int order);

}  // namespace projhardy
