#include "doctest.h"
#include "test_util.hpp"

using namespace projhardy;
using testutil::Rng;

namespace {

// Random Hermitian polynomial of bidegree <= 2 in each variable pair.
HermitianPoly random_hermitian(Rng& rng) {
  Poly p;
  for (int i = 0; i < 8; ++i) {
    const Exponents e{static_cast<int>(rng.uniform(0, 3)), static_cast<int>(rng.uniform(0, 3)),
                      static_cast<int>(rng.uniform(0, 3)), static_cast<int>(rng.uniform(0, 3))};
    const cd c = rng.complex();
    p.add_term(e, c);
    p.add_term({e[1], e[0], e[3], e[2]}, std::conj(c));
  }
  return HermitianPoly(p);
}

cd fd_wirtinger(const Poly& p, const Vec2& z, int var, bool bar) {
  const double h = 1e-5;
  Vec2 dx = Vec2::Zero(), dy = Vec2::Zero();
  dx(var) = h;
  dy(var) = cd(0, h);
  const cd px = (p.eval(z + dx) - p.eval(z - dx)) / (2 * h);
  const cd py = (p.eval(z + dy) - p.eval(z - dy)) / (2 * h);
  return 0.5 * (bar ? px + cd(0, 1) * py : px - cd(0, 1) * py);
}

}  // namespace

TEST_CASE("parser: examples from the grammar") {
  const HermitianPoly sphere = parse_poly("abs2(z1) + abs2(z2) - 1");
  CHECK(sphere.eval(Vec2(1.0, 0.0)) == doctest::Approx(0.0));
  CHECK(sphere.eval(Vec2(0.0, 0.0)) == doctest::Approx(-1.0));
  CHECK(sphere.eval(Vec2(cd(0.6, 0.0), cd(0.0, 0.8))) == doctest::Approx(0.0).epsilon(1e-15));

  const HermitianPoly sheet = parse_poly("abs2(z1) + 0.1*abs2(z2) - 1");
  CHECK(sheet.eval(Vec2(0.5, 2.0)) == doctest::Approx(0.25 + 0.4 - 1.0));

  CHECK_THROWS_AS(parse_poly("z1 - z2"), InputError);

  // Explicit monomials, complex literals and unary signs
  const Poly p = parse_expression("(0,2)*z1^2*conj(z2) - -3*z2 + re(z1)^2");
  const Vec2 z(cd(0.3, -0.4), cd(1.1, 0.2));
  const cd expected = cd(0, 2) * z(0) * z(0) * std::conj(z(1)) + 3.0 * z(1) + z(0).real() * z(0).real();
  CHECK(std::abs(p.eval(z) - expected) < 1e-14);
  CHECK(std::abs(parse_expression("im(z2)").eval(z) - z(1).imag()) < 1e-15);
  CHECK(parse_holomorphic("1 + z1*z2^3").is_holomorphic());
  CHECK_THROWS_AS(parse_holomorphic("conj(z1)"), InputError);
}

TEST_CASE("parser: syntax errors carry a position") {
  try {
    parse_poly("abs2(z1) + * 2");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 11);
  }
  try {
    parse_poly("abs2(z3)");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() >= 5);
  }
  CHECK_THROWS_AS(parse_poly("abs2(z1"), ParseError);
  CHECK_THROWS_AS(parse_poly("z1^-1"), ParseError);
  CHECK_THROWS_AS(parse_poly(""), ParseError);
}

TEST_CASE("Hermitian symmetry violation names both terms") {
  try {
    parse_poly("abs2(z1) + z1*conj(z2)");
    FAIL("expected a symmetry error");
  } catch (const InputError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("z1*conj(z2)") != std::string::npos);
    CHECK(msg.find("conj(z1)*z2") != std::string::npos);
  }
}

TEST_CASE("canonical text round-trips byte for byte") {
  Rng rng(2);
  for (int i = 0; i < 20; ++i) {
    const HermitianPoly p = random_hermitian(rng);
    const std::string text = p.to_string();
    const HermitianPoly q = parse_poly(text);
    CHECK(q.to_string() == text);
    const Vec2 z = rng.vec2();
    CHECK(std::abs(p.eval(z) - q.eval(z)) < 1e-13);
  }
  CHECK(parse_poly("1 - 1").to_string() == "0");
  CHECK(parse_poly("conj(z1)*z1 + z1*conj(z1)").to_string() == parse_poly("2*abs2(z1)").to_string());
}

TEST_CASE("evaluation of Hermitian polynomials is real") {
  Rng rng(4);
  for (int k = 0; k < 5; ++k) {
    const HermitianPoly p = random_hermitian(rng);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) worst = std::max(worst, std::abs(p.poly().eval(rng.vec2(1.5)).imag()));
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("Wirtinger derivatives") {
  const double eps = 0.1;
  const HermitianPoly rho = parse_poly("abs2(z1) + 0.1*abs2(z2) - 1");
  const Vec2 z(cd(0.3, 0.7), cd(-0.2, 0.5));
  CHECK((rho.dz(z) - Vec2(std::conj(z(0)), eps * std::conj(z(1)))).norm() < 1e-15);
  CHECK((rho.levi(z) - Mat2(Eigen::Vector2cd(1.0, eps).asDiagonal())).norm() < 1e-15);
  CHECK(rho.hess_holo(z).norm() < 1e-15);

  Rng rng(6);
  for (int k = 0; k < 10; ++k) {
    const HermitianPoly p = random_hermitian(rng);
    const Vec2 x = rng.vec2();
    for (int var = 0; var < 2; ++var) {
      const Wirtinger dz = var == 0 ? Wirtinger::dz1 : Wirtinger::dz2;
      const Wirtinger dzb = var == 0 ? Wirtinger::dzbar1 : Wirtinger::dzbar2;
      CHECK(std::abs(wirtinger(p.poly(), dz).eval(x) - fd_wirtinger(p.poly(), x, var, false)) < 1e-6);
      CHECK(std::abs(wirtinger(p.poly(), dzb).eval(x) - fd_wirtinger(p.poly(), x, var, true)) < 1e-6);
      // d/dzbar rho = conj(d/dz rho) for real rho
      CHECK(std::abs(wirtinger(p.poly(), dzb).eval(x) - std::conj(wirtinger(p.poly(), dz).eval(x))) < 1e-12);
    }
    // Levi entries are iterated Wirtinger derivatives
    const Poly d1 = wirtinger(p.poly(), Wirtinger::dz1);
    CHECK(std::abs(p.levi(x)(0, 1) - wirtinger(d1, Wirtinger::dzbar2).eval(x)) < 1e-12);
    // directional derivative against a real finite difference
    const Vec2 v = rng.vec2();
    const double h = 1e-6;
    const double fd = (p.eval(x + h * v) - p.eval(x - h * v)) / (2 * h);
    CHECK(std::abs(p.directional(x, v) - fd) < 1e-6);
  }
}

TEST_CASE("gradient hyperplane") {
  const HermitianPoly d1 = parse_poly("abs2(z1) - 1"), d2 = parse_poly("abs2(z2) - 1");
  const HermitianPoly s = parse_poly("abs2(z1) + abs2(z2) - 1");
  CHECK(projectively_equal(gradient_hyperplane(d1, Vec2(1.0, 1.0)), HomVec::hyperplane(-1, 1, 0)));
  CHECK(projectively_equal(gradient_hyperplane(d2, Vec2(1.0, 1.0)), HomVec::hyperplane(-1, 0, 1)));
  CHECK(projectively_equal(gradient_hyperplane(s, Vec2(1.0, 0.0)), HomVec::hyperplane(-1, 1, 0)));
  CHECK_THROWS_AS(gradient_hyperplane(s, Vec2(0.0, 0.0)), PreconditionError);

  Rng rng(8);
  for (int i = 0; i < 50; ++i) {
    const HermitianPoly p = random_hermitian(rng);
    const Vec2 z = rng.vec2();
    if (p.dz(z).norm() < 1e-6) continue;
    const HomVec w = gradient_hyperplane(p, z);
    CHECK(std::abs(pair(HomVec::affine_point(z), w)) <= 1e-14 * w.coords().norm() * (1 + z.norm()));
  }
}

TEST_CASE("transform_poly carries the zero set and the sign") {
  Rng rng(10);
  const HermitianPoly s = parse_poly("abs2(z1) + abs2(z2) - 1");
  for (int i = 0; i < 10; ++i) {
    const ProjMap t = rng.map(0.2);
    const HermitianPoly image = transform_poly(s, t);
    for (int k = 0; k < 10; ++k) {
      const Vec2 z = rng.vec2(0.9);
      const double before = s.eval(z);
      const double after = image.eval(t.apply_affine(z));
      CHECK((before < 0) == (after < 0));
      // positive factor |den of T^-1|^(2d) with d = 1
      const double factor = std::norm(t.inverse().denominator(t.apply_affine(z)));
      CHECK(after == doctest::Approx(before * factor).epsilon(1e-10));
    }
  }
}
