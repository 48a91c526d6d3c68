#include "projhardy/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace projhardy {

namespace {

GaussRule compute_gauss(int order) {
  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (int i = 0; i < (order + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    rule.weights[i] = rule.weights[order - 1 - i] = w;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
  return rule;
}

// Per-axis node/weight lists after mapping to the axis range.
void axis_rule(const Axis& axis, int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  const double len = axis.hi - axis.lo;
  if (axis.kind == Axis::Kind::periodic) {
    for (int i = 0; i < n; ++i) {
      x[i] = axis.lo + len * i / n;
      w[i] = len / n;
    }
    return;
  }
  const GaussRule& g = gauss_legendre(n);
  for (int i = 0; i < n; ++i) {
    x[i] = axis.lo + 0.5 * len * (g.nodes[i] + 1.0);
    w[i] = 0.5 * len * g.weights[i];
  }
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
  if (order < 1) throw InputError("gauss_legendre: order must be positive");
  static std::map<int, GaussRule> cache;
  static std::mutex mutex;
  std::lock_guard lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_gauss(order)).first;
  return it->second;
}

void CompensatedSum::step(double& sum, double& comp, double x) {
  const double t = sum + x;
  if (std::abs(sum) >= std::abs(x))
    comp += (sum - t) + x;
  else
    comp += (x - t) + sum;
  sum = t;
}

void CompensatedSum::add(cd x) {
  step(re_, cre_, x.real());
  step(im_, cim_, x.imag());
}

void for_each_tensor_node(std::span<const Axis> axes, int n,
                          const std::function<void(std::span<const double>, double)>& visit) {
  const std::size_t dim = axes.size();
  std::vector<std::vector<double>> xs(dim), ws(dim);
  for (std::size_t d = 0; d < dim; ++d) axis_rule(axes[d], n, xs[d], ws[d]);
  std::vector<int> idx(dim, 0);
  std::vector<double> point(dim);
  for (;;) {
    double weight = 1.0;
    for (std::size_t d = 0; d < dim; ++d) {
      point[d] = xs[d][idx[d]];
      weight *= ws[d][idx[d]];
    }
    visit(point, weight);
    std::size_t d = 0;
    while (d < dim && ++idx[d] == n) idx[d++] = 0;
    if (d == dim) break;
  }
}

cd tensor_sum(const Integrand& f, std::span<const Axis> axes, int n) {
  CompensatedSum acc;
  for_each_tensor_node(axes, n, [&](std::span<const double> p, double w) { acc.add(w * f(p)); });
  return acc.value();
}

QuadResult integrate_tensor(const Integrand& f, std::span<const Axis> axes, int n) {
  if (n < 2) throw InputError("integrate_tensor: need at least 2 points per axis");
  const cd fine = tensor_sum(f, axes, n);
  const cd coarse = tensor_sum(f, axes, n / 2);
  long nodes = 1;
  for (std::size_t d = 0; d < axes.size(); ++d) nodes *= n;
  return {fine, std::abs(fine - coarse), nodes};
}

QuadResult integrate_periodic(const Integrand& f, int dim, int n) {
  if (dim < 1 || dim > 3) throw InputError("integrate_periodic: dimension must be 1, 2 or 3");
  const std::vector<Axis> axes(dim, Axis::periodic());
  return integrate_tensor(f, axes, n);
}

QuadResult integrate_patch(const Integrand& f, std::span<const Axis> box, int order) {
  for (const Axis& a : box)
    if (a.kind != Axis::Kind::interval) throw InputError("integrate_patch: box axes must be intervals");
  return integrate_tensor(f, box, order);
}

QuadResult integrate_simplex(const Integrand& f, int n, int order) {
  if (n == 2) {
    const Axis axis = Axis::interval(0.0, 1.0);
    auto g = [&](std::span<const double> p) {
      const double w[2] = {p[0], 1.0 - p[0]};
      return f(w);
    };
    return integrate_tensor(g, std::span(&axis, 1), order);
  }
  if (n == 3) {
    const Axis box[2] = {Axis::interval(0.0, 1.0), Axis::interval(0.0, 1.0)};
    auto g = [&](std::span<const double> p) {
      const double u = p[0], v = p[1];
      const double w[3] = {u, (1.0 - u) * v, (1.0 - u) * (1.0 - v)};
      return -(1.0 - u) * f(w);
    };
    return integrate_tensor(g, box, order);
  }
  throw InputError("integrate_simplex: n must be 2 or 3");
}

}  // namespace projhardy
