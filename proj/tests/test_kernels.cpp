#include "doctest.h"
#include "test_util.hpp"

#include "projhardy/kernels.hpp"

using namespace projhardy;
using testutil::Rng;
using testutil::bilinear;
using testutil::cross;
using testutil::rel;

namespace {

struct Incident {
  HomVec z;
  HomVec w;
  std::array<IncidenceTangent, 3> frame;
};

Incident random_incident(Rng& rng) {
  const Vec3 z = rng.vec3();
  const Vec3 w = cross(rng.vec3(), z);
  std::array<IncidenceTangent, 3> frame;
  for (auto& t : frame) {
    t.dz = rng.vec3();
    const Vec3 r = rng.vec3();
    const Vec3 e = z.conjugate();
    t.dw = r - (bilinear(w, t.dz) + bilinear(r, z)) / bilinear(e, z) * e;
  }
  return {HomVec(z, Role::point), HomVec(w, Role::hyperplane), frame};
}

// Independent evaluation of z0^2 w0^2 / (2 pi i)^2 (1 / z2_hat) dw1_hat ^ dz1_hat ^ dz2_hat
// with w1_hat = -w1 / w0 and the derivatives of the quotients written out.
cd affine_oracle(const Incident& d) {
  const Vec3& z = d.z.coords();
  const Vec3& w = d.w.coords();
  Eigen::Matrix3cd m;
  for (int i = 0; i < 3; ++i) {
    const auto& v = d.frame[i];
    m(i, 0) = -(v.dw(1) / w(0) - w(1) * v.dw(0) / (w(0) * w(0)));
    m(i, 1) = v.dz(1) / z(0) - z(1) * v.dz(0) / (z(0) * z(0));
    m(i, 2) = v.dz(2) / z(0) - z(2) * v.dz(0) / (z(0) * z(0));
  }
  return z(0) * z(0) * w(0) * w(0) / (kTwoPiI * kTwoPiI) * (z(0) / z(2)) * m.determinant();
}

}  // namespace

TEST_CASE("universal form: alternation and linearity") {
  Rng rng(1);
  for (int i = 0; i < 10; ++i) {
    Incident d = random_incident(rng);
    const cd base = omega_cfl(d.z, d.w, d.frame).value;
    auto swapped = d.frame;
    std::swap(swapped[0], swapped[2]);
    CHECK(rel(omega_cfl(d.z, d.w, swapped).value, -base) < 1e-12);
    auto scaled = d.frame;
    scaled[1].dz *= cd(2.0, -1.0);
    scaled[1].dw *= cd(2.0, -1.0);
    CHECK(rel(omega_cfl(d.z, d.w, scaled).value, cd(2.0, -1.0) * base) < 1e-12);
  }
}

TEST_CASE("universal form: charts, the affine expression, and symmetry") {
  Rng rng(2);
  for (int i = 0; i < 100; ++i) {
    const Incident d = random_incident(rng);
    const cd c00 = omega_cfl(d.z, d.w, d.frame, 0, 0).value;
    CHECK(rel(omega_cfl(d.z, d.w, d.frame, 1, 1).value, c00) < 1e-10);
    CHECK(rel(omega_cfl(d.z, d.w, d.frame, 2, 0).value, c00) < 1e-10);
    CHECK(rel(affine_oracle(d), c00) < 1e-10);
    CHECK(rel(omega_affine_form(d.z, d.w, d.frame).value, c00) < 1e-10);

    std::array<IncidenceTangent, 3> swapped;
    for (int k = 0; k < 3; ++k) swapped[k] = {d.frame[k].dw, d.frame[k].dz};
    const cd back = omega_cfl(HomVec(d.w.coords(), Role::point), HomVec(d.z.coords(), Role::hyperplane), swapped).value;
    CHECK(rel(back, c00) < 1e-10);  // (-1)^n, n = 2
  }
}

TEST_CASE("universal form: precondition errors") {
  Rng rng(3);
  Incident d = random_incident(rng);
  CHECK_THROWS_AS(omega_cfl(d.z, HomVec(d.w.coords() + Vec3(0.1, 0, 0), Role::hyperplane), d.frame), InputError);
  auto bent = d.frame;
  bent[0].dw += Vec3(0.3, 0.0, 0.0);
  CHECK_THROWS_AS(omega_cfl(d.z, d.w, bent), InputError);
  const HomVec z = HomVec::point(0.0, 1.0, 1.0);
  const HomVec w = HomVec::hyperplane(1.0, 1.0, -1.0);
  std::array<IncidenceTangent, 3> frame;
  for (auto& t : frame) t = {Vec3::Zero(), Vec3::Zero()};
  CHECK_THROWS_AS(omega_cfl(z, w, frame, 0, 0), PreconditionError);
}

TEST_CASE("smooth Leray density") {
  const HermitianPoly sphere = parse_poly("abs2(z1) + abs2(z2) - 1");
  const Vec2 z(cd(0.6, 0.0), cd(0.0, 0.8));
  const Vec2 tau(0.1, cd(0.0, -0.2));
  const std::array<Vec2, 3> frame{Vec2(cd(0, 0.6), 0.0), Vec2(0.0, cd(-0.8, 0)), Vec2(cd(-0.8, 0), cd(0, 0.6))};
  const cd base = smooth_leray_density(sphere, z, tau, frame).value;
  std::array<Vec2, 3> doubled = frame;
  doubled[0] *= 2.0;
  CHECK(rel(smooth_leray_density(sphere, z, tau, doubled).value, 2.0 * base) < 1e-14);
  std::array<Vec2, 3> swapped{frame[1], frame[0], frame[2]};
  CHECK(rel(smooth_leray_density(sphere, z, tau, swapped).value, -base) < 1e-14);
  CHECK(rel(gauss_map_leray_density(sphere, z, tau, frame).value, base) < 1e-12);

  // tau on the complex tangent line through z
  const Vec2 on_line = z + cd(0.3, 0.1) * Vec2(-std::conj(z(1)), std::conj(z(0)));
  CHECK_THROWS_AS(smooth_leray_density(sphere, z, on_line, frame), PoleError);

  Rng rng(4);
  const HermitianPoly ell = parse_poly("abs2(z1) + 0.3*abs2(z2) + 0.1*re(z1^2) - 1");
  for (int i = 0; i < 20; ++i) {
    const std::array<Vec2, 3> f{rng.vec2(), rng.vec2(), rng.vec2()};
    const Vec2 p = rng.vec2(0.8), t = rng.vec2(0.2);
    CHECK(rel(gauss_map_leray_density(ell, p, t, f).value, smooth_leray_density(ell, p, t, f).value) < 1e-10);
  }
}

TEST_CASE("corner kernel: bidisk anchor and Cramer identity") {
  const std::array<HomVec, 2> strong{HomVec::hyperplane(-1, 1, 0), HomVec::hyperplane(-1, 0, 1)};
  const std::array<Vec2, 2> coordinate{Vec2(1.0, 0.0), Vec2(0.0, 1.0)};
  const Density k = corner_kernel(HomVec::point(1, 1, 1), strong, HomVec::point(1, 0, 0), coordinate);
  CHECK(std::abs(k.value - 1.0 / (kTwoPiI * kTwoPiI)) < 1e-16);

  // The form that holds: z1 det0 = -z0 det1.
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const Vec3 z = rng.vec3();
    const HomVec w1(cross(rng.vec3(), z), Role::hyperplane), w2(cross(rng.vec3(), z), Role::hyperplane);
    const double scale = z.norm() * w1.coords().norm() * w2.coords().norm();
    CHECK(std::abs(z(1) * minor_det(w1, w2, 0) + z(0) * minor_det(w1, w2, 1)) <= 1e-12 * scale);
    CHECK(std::abs(z(2) * minor_det(w1, w2, 0) - z(0) * minor_det(w1, w2, 2)) <= 1e-12 * scale);
  }
  // The literal "z0 det0 = -z1 det1" fails on simple corner data.
  const Vec3 z(1, 2, 3);
  const HomVec w1 = HomVec::hyperplane(-2, 1, 0), w2 = HomVec::hyperplane(-3, 0, 1);
  REQUIRE(std::abs(bilinear(w1.coords(), z)) == 0.0);
  REQUIRE(std::abs(bilinear(w2.coords(), z)) == 0.0);
  CHECK(z(0) * minor_det(w1, w2, 0) == cd(1.0));
  CHECK(-z(1) * minor_det(w1, w2, 1) == cd(4.0));
}

TEST_CASE("corner kernel: projective equivariance") {
  Rng rng(6);
  for (int i = 0; i < 100; ++i) {
    const ProjMap t = rng.map(0.3);
    const Vec2 z = rng.vec2(0.8);
    const Vec2 tau = rng.vec2(0.3);
    const Vec3 zh(1.0, z(0), z(1));
    const std::array<HomVec, 2> strong{HomVec(cross(rng.vec3(), zh), Role::hyperplane),
                                       HomVec(cross(rng.vec3(), zh), Role::hyperplane)};
    const std::array<Vec2, 2> frame{rng.vec2(), rng.vec2()};
    const cd before = corner_kernel(HomVec::affine_point(z), strong, HomVec::affine_point(tau), frame).value;

    const std::array<HomVec, 2> moved{transform(t, strong[0]), transform(t, strong[1])};
    const std::array<Vec2, 2> pushed{t.push_forward(z, frame[0]), t.push_forward(z, frame[1])};
    const cd after = corner_kernel(HomVec::affine_point(t.apply_affine(z)), moved,
                                   HomVec::affine_point(t.apply_affine(tau)), pushed)
                         .value;
    const cd factor = t.denominator(tau) * t.denominator(tau) / (t.denominator(z) * t.denominator(z));
    CHECK(rel(after, factor * before) < 1e-9);
  }
}

TEST_CASE("corner kernel: poles and degenerate frames") {
  const std::array<HomVec, 2> strong{HomVec::hyperplane(-1, 1, 0), HomVec::hyperplane(-1, 0, 1)};
  const std::array<Vec2, 2> frame{Vec2(1.0, 0.0), Vec2(0.0, 1.0)};
  CHECK_THROWS_AS(corner_kernel(HomVec::point(1, 1, 1), strong, HomVec::point(1, 1, 0.3), frame), PoleError);
  // Two real directions spanning one complex line: a 1-dimensional edge carries no mass.
  const Vec2 v(cd(0.3, 0.4), cd(-1.0, 0.2));
  const std::array<Vec2, 2> thin{v, cd(0.0, 1.0) * v};
  CHECK(std::abs(corner_kernel(HomVec::point(1, 1, 1), strong, HomVec::point(1, 0, 0), thin).value) <= 1e-12);
  const std::array<Vec2, 2> collinear{v, -2.5 * v};
  CHECK(std::abs(corner_kernel(HomVec::point(1, 1, 1), strong, HomVec::point(1, 0, 0), collinear).value) <= 1e-12);
}

TEST_CASE("simplex integrals") {
  const std::array<cd, 2> zero{0.0, 0.0}, anchor{0.5, 1.0 / 3.0};
  CHECK(std::abs(simplex_integral(zero, 2, SimplexMode::closed) - 1.0) < 1e-15);
  CHECK(std::abs(simplex_integral(zero, 2, SimplexMode::quadrature) - 1.0) < 1e-14);
  CHECK(std::abs(simplex_integral(anchor, 2, SimplexMode::closed) - 3.0) < 1e-14);
  CHECK(std::abs(simplex_integral(anchor, 2, SimplexMode::quadrature) - 3.0) < 1e-12);
  const std::array<cd, 3> three{0.5, 0.0, 0.0};
  CHECK(std::abs(simplex_integral(three, 3, SimplexMode::closed) + 1.0) < 1e-15);
  CHECK(std::abs(simplex_integral(three, 3, SimplexMode::quadrature) + 1.0) < 1e-6);

  // Independent check of the n = 2 closed form: the integrand 1/(1 - tau1 u - tau2 (1 - u))^2
  // has antiderivative 1/((tau1 - tau2)(1 - tau1 u - tau2 (1 - u))).
  const cd t1(0.2, 0.4), t2(-0.3, 0.1);
  const auto prim = [&](double u) { return 1.0 / ((t1 - t2) * (1.0 - t1 * u - t2 * (1.0 - u))); };
  const std::array<cd, 2> tau{t1, t2};
  CHECK(rel(simplex_integral(tau, 2, SimplexMode::closed), prim(1.0) - prim(0.0)) < 1e-14);

  const std::array<cd, 2> pole{1.0 + 1e-9, 0.0};
  CHECK_THROWS_AS(simplex_integral(pole, 2, SimplexMode::quadrature), PoleError);
  CHECK_THROWS_AS(simplex_integral(zero, 3, SimplexMode::closed), InputError);
}

TEST_CASE("pushforward of the universal form along weak-tangent fibers") {
  const PwsDomain bidisk = testutil::fixture("bidisk.json");
  const PushforwardReport b = pushforward_corner_check(bidisk, bidisk.edges.front(), Vec2(1.0, 1.0), Vec2(0.0, 0.0));
  CHECK(b.deviation <= 1e-6);
  CHECK(std::abs(b.closed_value) > 0.0);

  const PwsDomain pert = testutil::fixture("perturbed_bidisk.json");
  Rng rng(7);
  for (int i = 0; i < 5; ++i) {
    const double p[2] = {rng.uniform(0, 2 * kPi), rng.uniform(0, 2 * kPi)};
    const Vec2 z = pert.edges.front().chart->evaluate(p).z;
    const PushforwardReport r = pushforward_corner_check(pert, pert.edges.front(), z, rng.vec2(0.3));
    CHECK(r.deviation <= 1e-5);
    CHECK(rel(r.fiber_value, r.closed_value) <= 1e-5);
  }
}

TEST_CASE("oriented edge frames") {
  const PwsDomain pert = testutil::fixture("perturbed_bidisk.json");
  const std::vector<int> members{0, 1};
  const double p[2] = {2.0, 0.5};
  const Vec2 z = pert.edges.front().chart->evaluate(p).z;
  const auto frame = edge_tangent_frame(pert, members, z);
  CHECK(edge_orientation(pert.hypersurfaces[0].rho, pert.hypersurfaces[1].rho, z, frame) == 1.0);
  CHECK(std::abs(as_real(frame[0]).dot(as_real(frame[1]))) < 1e-14);
}
