#include "doctest.h"
#include "test_util.hpp"

#include "projhardy/hardy.hpp"

using namespace projhardy;
using testutil::Rng;
using testutil::rel;

namespace {

// Orthonormal real frame of the tangent space of the unit sphere at z.
std::array<Vec2, 3> sphere_frame(const Vec2& z) {
  const Vec2 t(-std::conj(z(1)), std::conj(z(0)));
  return {cd(0, 1) * z, t, cd(0, 1) * t};
}

Vec2 sphere_point(Rng& rng) {
  Vec2 z = rng.vec2();
  return z / z.norm();
}

}  // namespace

TEST_CASE("bordered Levi determinant on the sphere") {
  const HermitianPoly s = parse_poly("abs2(z1) + abs2(z2) - 1");
  Rng rng(1);
  for (int i = 0; i < 20; ++i) {
    const Vec2 z = sphere_point(rng);
    // det [[0, conj z1, conj z2], [z1, 1, 0], [z2, 0, 1]] = -(|z1|^2 + |z2|^2)
    CHECK(std::abs(bordered_levi_determinant(s, z) + 1.0) < 1e-14);
  }
}

TEST_CASE("Fefferman density") {
  const HermitianPoly s = parse_poly("abs2(z1) + abs2(z2) - 1");
  Rng rng(2);
  const double reference = fefferman_density(s, Vec2(1.0, 0.0), sphere_frame(Vec2(1.0, 0.0)));
  CHECK(reference > 0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Vec2 z = sphere_point(rng);
    worst = std::max(worst, std::abs(fefferman_density(s, z, sphere_frame(z)) - reference));
  }
  CHECK(worst <= 1e-10);

  // Dilation z -> lambda z: density picks up |lambda^2|^(4/3).
  for (double lambda : {0.5, 1.7, 3.0}) {
    const HermitianPoly big = parse_poly("abs2(z1) + abs2(z2) - " + std::to_string(lambda * lambda));
    const Vec2 z = sphere_point(rng);
    auto frame = sphere_frame(z);
    const double before = fefferman_density(s, z, frame);
    for (auto& v : frame) v *= lambda;
    const double after = fefferman_density(big, lambda * z, frame);
    const double exponent = std::log(after / before) / std::log(lambda * lambda);
    CHECK(std::abs(exponent - 4.0 / 3.0) <= 1e-8 * 4.0 / 3.0);
  }

  // Levi-flat face of the bidisk carries no Fefferman mass.
  const HermitianPoly flat = parse_poly("abs2(z1) - 1");
  const Vec2 p(1.0, 0.3);
  const std::array<Vec2, 3> f{Vec2(cd(0, 1), 0.0), Vec2(0.0, 1.0), Vec2(0.0, cd(0, 1))};
  CHECK(fefferman_density(flat, p, f) == 0.0);
  CHECK_THROWS_AS(fefferman_density(s, Vec2(0.0, 0.0), f), PreconditionError);
  const HermitianPoly concave = parse_poly("1 - abs2(z1) - abs2(z2)");
  CHECK_THROWS_AS(fefferman_density(concave, Vec2(1.0, 0.0), sphere_frame(Vec2(1.0, 0.0))), PreconditionError);
}

TEST_CASE("edge measure density") {
  const std::array<Vec2, 2> frame{Vec2(cd(0, 1), 0.0), Vec2(0.0, cd(0, 1))};
  CHECK(edge_measure_density(0.0, frame) == 0.0);
  CHECK(edge_measure_density(8.0, frame) == doctest::Approx(2.0));
  const std::array<Vec2, 2> doubled{2.0 * frame[0], frame[1]};
  CHECK(edge_measure_density(8.0, doubled) == doctest::Approx(4.0));
  CHECK_THROWS_AS(edge_measure_density(-1e-3, frame), PreconditionError);

  const PwsDomain pert = testutil::fixture("perturbed_bidisk.json");
  const std::vector<int> members{0, 1};
  Rng rng(3);
  for (int i = 0; i < 5; ++i) {
    const double p[2] = {rng.uniform(0, 2 * kPi), rng.uniform(0, 2 * kPi)};
    const ChartPoint cp = pert.edges.front().chart->evaluate(p);
    const std::array<Vec2, 2> t{cp.tangents[0], cp.tangents[1]};
    CHECK(edge_measure_density(pert, members, cp.z, t) > 0.0);
  }
}

TEST_CASE("Hardy norm: homogeneity, zero section and Gram matrix") {
  const PwsDomain pert = testutil::fixture("perturbed_bidisk.json");
  const BoundaryMeasure mu(pert);
  const Resolution res{12, 12};
  const Section f(parse_holomorphic("1 + z1 - (0,0.5)*z2^2"));
  const Section zero(parse_holomorphic("0"));
  const Section scaled(parse_holomorphic("(2,-1) + (2,-1)*z1 - (0.5,1)*z2^2"));  // (2 - i) f
  const NormReport n = hardy_norm(f, mu, res);
  CHECK(n.norm_squared > 0);
  CHECK(n.faces > 0);
  CHECK(n.edges > 0);
  CHECK(hardy_norm(zero, mu, res).norm_squared == 0.0);
  CHECK(hardy_norm(scaled, mu, res).norm_squared == doctest::Approx(5.0 * n.norm_squared).epsilon(1e-12));

  std::vector<Section> family;
  for (const char* text : {"1", "z1", "z2", "z1*z2", "z1^2"}) family.emplace_back(parse_holomorphic(text));
  const Eigen::MatrixXcd g = gram_matrix(family, mu, res);
  CHECK((g - g.adjoint()).norm() < 1e-12 * g.norm());
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(g).eigenvalues();
  CHECK(ev.minCoeff() > 0);
  CHECK(ev.maxCoeff() / ev.minCoeff() < 1e8);
  CHECK(std::abs(g(0, 0).real() - hardy_norm(family[0], mu, res).norm_squared) < 1e-12 * g(0, 0).real());
}

TEST_CASE("Hardy norm is invariant under projective maps") {
  const PwsDomain pert = testutil::fixture("perturbed_bidisk.json");
  const BoundaryMeasure mu(pert);
  const Resolution res{16, 16};
  const Section f(parse_holomorphic("1 + (0.3,0.2)*z1*z2 - z2"));
  const double base = hardy_norm(f, mu, res).norm_squared;
  Rng rng(4);
  for (int i = 0; i < 3; ++i) {
    const ProjMap t = rng.map(0.1);
    const PwsDomain moved = pert.transformed(t);
    const BoundaryMeasure moved_mu(moved);
    const double there = hardy_norm(f.transported(t), moved_mu, res).norm_squared;
    CHECK(std::abs(there - base) <= 1e-5 * base);
  }
}

TEST_CASE("transported sections pull back to the original") {
  Rng rng(5);
  const Poly p = parse_holomorphic("1 + z1^2 - (0,3)*z2");
  const Section f(p);
  for (int i = 0; i < 10; ++i) {
    const ProjMap t = rng.map(0.2);
    const Section g = f.transported(t);
    const Vec2 z = rng.vec2(0.5);
    const auto image = [&](const Vec2& x) { return g(x); };
    CHECK(rel(pull_back_section(t, image, {-2, 0}, z).value, f(z)) < 1e-12);
  }
}

TEST_CASE("reproducing formula") {
  SUBCASE("unit sphere, constant section") {
    const PwsDomain sphere = testutil::fixture("sphere.json");
    const ReproduceReport r = reproduce(Section(parse_holomorphic("1")), Vec2(cd(0.1, 0.05), -0.2), sphere, {32, 32});
    CHECK(r.rel_err <= 1e-8);
    CHECK(r.edges.empty());
  }
  SUBCASE("bidisk: iterated Cauchy formula through the corner") {
    const PwsDomain bidisk = testutil::fixture("bidisk.json");
    const Section f(parse_holomorphic("1 + z1*z2^2 - 2*z1^3 + (0,1)*z2"));
    const ReproduceReport r = reproduce(f, Vec2(cd(0.2, 0.1), -0.3), bidisk, {8, 64});
    CHECK(r.rel_err <= 1e-10);
    CHECK(std::abs(r.faces_total) <= 1e-12);
  }
  SUBCASE("perturbed bidisk: faces and corner together") {
    const PwsDomain pert = testutil::fixture("perturbed_bidisk.json");
    const ReproduceReport r = reproduce(Section(parse_holomorphic("1")), Vec2(0.0, 0.0), pert, {24, 64});
    CHECK(r.rel_err <= 1e-4);
    CHECK(std::abs(r.edges_total) > 1e-3);
    // refinement helps
    const ReproduceReport coarse = reproduce(Section(parse_holomorphic("1")), Vec2(0.0, 0.0), pert, {8, 16});
    CHECK(r.rel_err < coarse.rel_err);
  }
  SUBCASE("errors") {
    const PwsDomain bidisk = testutil::fixture("bidisk.json");
    const Section one(parse_holomorphic("1"));
    CHECK_THROWS_AS(reproduce(one, Vec2(1.0, 0.5), bidisk, {8, 16}), PoleError);
    CHECK_THROWS_AS(reproduce(one, Vec2(2.0, 0.5), bidisk, {8, 16}), PreconditionError);
  }
}
