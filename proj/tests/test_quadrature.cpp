#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <sstream>

#include "cfint/kernels.hpp"
#include "cfint/quadrature.hpp"
#include "doctest.h"

using namespace cfint;

namespace {

Real sphere_area(int n) {  // sigma(S^{2n-1}) = 2 pi^n / (n-1)!
  Real fact = 1.0;
  for (int t = 2; t <= n - 1; ++t) fact *= t;
  return 2.0 * std::pow(kPi, n) / fact;
}

Real ball_volume(int n) {  // Vol(B^{2n}) = pi^n / n!
  Real fact = 1.0;
  for (int t = 2; t <= n; ++t) fact *= t;
  return std::pow(kPi, n) / fact;
}

Domain ellipsoid12() {
  RealVec a(2);
  a << 1.0, 2.0;
  return make_ellipsoid(a);
}

}  // namespace

TEST_CASE("gauss-legendre: exactness degree, positivity, interval map") {
  QuadratureRule1D gl = gauss_legendre(5);
  CHECK(gl.weights.sum() == doctest::Approx(2.0).epsilon(1e-15));
  for (int i = 0; i < 5; ++i) {
    CHECK(gl.weights[i] > 0.0);
    CHECK(std::abs(gl.nodes[i]) < 1.0);
    if (i > 0) CHECK(gl.nodes[i] > gl.nodes[i - 1]);
  }
  // Exact through degree 9, measurably wrong at degree 10.
  for (int k = 1; k <= 9; ++k) {
    Real s = 0.0;
    for (int i = 0; i < 5; ++i) s += gl.weights[i] * std::pow(gl.nodes[i], k);
    Real want = (k % 2 == 0) ? 2.0 / (k + 1) : 0.0;
    CHECK(std::abs(s - want) < 1e-14);
  }
  Real s10 = 0.0;
  for (int i = 0; i < 5; ++i) s10 += gl.weights[i] * std::pow(gl.nodes[i], 10);
  CHECK(std::abs(s10 - 2.0 / 11.0) > 1e-5);

  QuadratureRule1D mapped = gauss_legendre(6, 0.0, 1.0);
  Real cubes = 0.0;
  for (int i = 0; i < 6; ++i) cubes += mapped.weights[i] * std::pow(mapped.nodes[i], 3);
  CHECK(cubes == doctest::Approx(0.25).epsilon(1e-14));
  CHECK_THROWS_AS((void)gauss_legendre(0), std::invalid_argument);
}

TEST_CASE("sphere quadrature: closed-form areas") {
  auto q1 = sphere_quadrature(1, 2, 40);
  CHECK(std::abs(q1.total_weight() - 2.0 * kPi) < 1e-13);

  auto q2 = sphere_quadrature(2, 20, 40);
  CHECK(std::abs(q2.total_weight() - sphere_area(2)) < 1e-12);

  auto q3 = sphere_quadrature(3, 12, 12);
  CHECK(std::abs(q3.total_weight() - sphere_area(3)) < 1e-10);

  // n=4 hits the curse of dimension; the rule is only coarsely resolved
  // here, backed by the factorization identity below.
  auto q4 = sphere_quadrature(4, 6, 4);
  CHECK(std::abs(q4.total_weight() - sphere_area(4)) < 0.02 * sphere_area(4));
  // Total weight factorizes into 1-D Gauss-Legendre sums times 2 pi, so the
  // 1-D exactness checks above control the area error at any resolution.
  QuadratureRule1D gl = gauss_legendre(6, 0.0, kPi);
  Real product = 2.0 * kPi;
  for (int k = 1; k <= 6; ++k) {
    Real s = 0.0;
    for (int i = 0; i < 6; ++i)
      s += gl.weights[i] * std::pow(std::sin(gl.nodes[i]), k);
    product *= s;
  }
  CHECK(q4.total_weight() == doctest::Approx(product).epsilon(1e-12));
}

TEST_CASE("sphere quadrature: node residuals, weights, caches") {
  auto q = sphere_quadrature(2, 10, 20);
  Domain ball = make_unit_ball(2);
  REQUIRE(q.size() == 10 * 10 * 20);
  REQUIRE(q.frames.size() == q.size());
  REQUIRE(q.dbar_grads.size() == q.size());
  REQUIRE(q.levi_leray.size() == q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    CHECK(std::abs(ball.defining.rho(q.nodes[i])) <= kBoundaryTol);
    CHECK(q.weights[i] > 0.0);
    CHECK((q.dbar_grads[i] - q.nodes[i].conjugate()).norm() < 1e-15);
  }
  // Spot-check cached frames and densities against direct evaluation.
  for (std::size_t i = 0; i < q.size(); i += 97) {
    const TangentFrame& fr = q.frames[i];
    CHECK((fr.base - q.nodes[i]).norm() < 1e-15);
    CHECK(std::abs(fr.normal.norm() - 1.0) < 1e-14);
    CHECK(ball.defining.rho(q.nodes[i] + 1e-6 * fr.normal) > 0.0);  // outward
    for (std::size_t s = 0; s < fr.tangents.size(); ++s) {
      CHECK(std::abs(real_dot(fr.normal, fr.tangents[s])) < 1e-13);
      for (std::size_t t = s + 1; t < fr.tangents.size(); ++t)
        CHECK(std::abs(real_dot(fr.tangents[s], fr.tangents[t])) < 1e-13);
    }
    Cx direct = levi_leray_density(ball, q.nodes[i], fr);
    CHECK(std::abs(q.levi_leray[i] - direct) < 1e-13);
  }
  // Odd moment vanishes by symmetry.
  Cx m1 = integrate(q, [](const CxVec& w) { return w[0]; });
  CHECK(std::abs(m1) < 1e-12);

  CHECK_THROWS_AS((void)sphere_quadrature(2, 1, 8), std::invalid_argument);
}

TEST_CASE("radial solve: ball and ellipsoid rays") {
  Domain ball = make_unit_ball(2);
  Domain ell = ellipsoid12();
  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    CxVec u = rng.unit_direction(2);
    CHECK(std::abs(radial_solve(ball, u) - 1.0) < 1e-12);
    Real r = radial_solve(ell, u);
    CHECK(std::abs(ell.defining.rho(ell.star_center + r * u)) <= 1e-12);
  }
  CxVec e1(2), e2(2);
  e1 << Cx{1.0, 0.0}, Cx{0.0, 0.0};
  e2 << Cx{0.0, 0.0}, Cx{1.0, 0.0};
  CHECK(std::abs(radial_solve(ell, e1) - 1.0) < 1e-12);
  CHECK(std::abs(radial_solve(ell, e2) - 1.0 / std::sqrt(2.0)) < 1e-12);
}

TEST_CASE("radial graph quadrature: ball reproduces the sphere rule") {
  auto sq = sphere_quadrature(2, 8, 16);
  auto q = radial_graph_quadrature(make_unit_ball(2), sq);
  REQUIRE(q.size() == sq.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    CHECK((q.nodes[i] - sq.nodes[i]).norm() < 1e-12);
    CHECK(std::abs(q.weights[i] - sq.weights[i]) < 1e-11 * sq.weights[i]);
    CHECK(std::abs(q.levi_leray[i] - sq.levi_leray[i]) < 1e-12);
  }
}

TEST_CASE("radial graph quadrature: ellipsoid spectral self-convergence") {
  Domain ell = ellipsoid12();
  auto f = [](const CxVec& w) {
    return Cx{std::exp(0.7 * w[0].real() - 0.2 * w[1].imag()), 0.0};
  };
  auto ref = radial_graph_quadrature(ell, sphere_quadrature(2, 32, 64));
  Real ref_sigma = ref.total_weight();
  Cx ref_f = integrate(ref, f);

  auto coarse = radial_graph_quadrature(ell, sphere_quadrature(2, 8, 16));
  auto fine = radial_graph_quadrature(ell, sphere_quadrature(2, 16, 32));
  Real es_coarse = std::abs(coarse.total_weight() - ref_sigma);
  Real es_fine = std::abs(fine.total_weight() - ref_sigma);
  Real ef_coarse = std::abs(integrate(coarse, f) - ref_f);
  Real ef_fine = std::abs(integrate(fine, f) - ref_f);
  // Frozen from a convergence study: (8,16) errors ~2.5e-5 relative, (16,32)
  // ~7e-10; a doubling must buy far more than 4th order.
  CHECK(es_coarse < 1e-3 * ref_sigma);
  CHECK(es_fine < 5e-9 * ref_sigma);
  CHECK(es_fine < es_coarse / 16.0);
  CHECK(ef_coarse < 1e-3 * std::abs(ref_f));
  CHECK(ef_fine < 5e-9 * std::abs(ref_f));
  CHECK(ef_fine < ef_coarse / 16.0);

  for (std::size_t i = 0; i < fine.size(); i += 53) {
    CHECK(std::abs(ell.defining.rho(fine.nodes[i])) <= kBoundaryTol);
    CHECK(fine.weights[i] > 0.0);
    CHECK(ell.defining.rho(fine.nodes[i] + 1e-6 * fine.frames[i].normal) > 0.0);
    CHECK(fine.levi_leray[i].real() > 0.0);
  }
}

TEST_CASE("radial graph quadrature: error paths") {
  auto sq = sphere_quadrature(2, 4, 8);
  RealVec a(3);
  a << 1.0, 1.0, 2.0;
  CHECK_THROWS_AS((void)radial_graph_quadrature(make_ellipsoid(a), sq),
                  std::invalid_argument);

  // Gradient data orthogonal to every ray: tangential-ray rejection.
  DefiningFunction twisted;
  twisted.n = 2;
  twisted.rho = [](const CxVec& w) { return w.squaredNorm() - 1.0; };
  twisted.dbar_grad = [](const CxVec& w) { return (kImag * w.conjugate()).eval(); };
  twisted.hess_holo = [](const CxVec&) { return CxMat::Zero(2, 2).eval(); };
  twisted.hess_mixed = [](const CxVec&) { return CxMat::Identity(2, 2).eval(); };
  Domain bad;
  bad.defining = twisted;
  bad.star_center = CxVec::Zero(2);
  bad.label = "tangent-gradient";
  CHECK_THROWS_AS((void)radial_graph_quadrature(bad, sq), DegenerateBoundary);
}

TEST_CASE("volume quadrature: closed-form volumes and odd moments") {
  auto vq1 = ball_volume_quadrature(1, 8, sphere_quadrature(1, 2, 32));
  CHECK(std::abs(vq1.total_weight() - ball_volume(1)) < 1e-13);

  auto sq2 = sphere_quadrature(2, 12, 24);
  auto vq2 = ball_volume_quadrature(2, 8, sq2);
  CHECK(std::abs(vq2.total_weight() - ball_volume(2)) < 1e-12);
  Cx m1 = integrate(vq2, [](const CxVec& w) { return w[0]; });
  CHECK(std::abs(m1) < 1e-12);
  for (std::size_t i = 0; i < vq2.size(); i += 101) {
    CHECK(vq2.weights[i] > 0.0);
    CHECK(vq2.nodes[i].norm() < 1.0);
  }

  auto vq3 = ball_volume_quadrature(3, 8, sphere_quadrature(3, 12, 12));
  CHECK(std::abs(vq3.total_weight() - ball_volume(3)) < 1e-11);
  auto vq4 = ball_volume_quadrature(4, 6, sphere_quadrature(4, 6, 4));
  CHECK(std::abs(vq4.total_weight() - ball_volume(4)) < 0.02 * ball_volume(4));

  // Star-shaped transport: exact ellipsoid volume pi^2/(2 a_1 a_2).
  auto sv = star_volume_quadrature(ellipsoid12(), 12, sphere_quadrature(2, 20, 40));
  CHECK(std::abs(sv.total_weight() - kPi * kPi / 4.0) < 1e-11);

  // On the ball the star rule coincides with the direct one.
  auto direct = ball_volume_quadrature(2, 6, sphere_quadrature(2, 6, 12));
  auto star = star_volume_quadrature(make_unit_ball(2), 6, sphere_quadrature(2, 6, 12));
  REQUIRE(direct.size() == star.size());
  Real worst = 0.0;
  for (std::size_t i = 0; i < direct.size(); ++i)
    worst = std::max(worst, std::abs(direct.total_weight() - star.total_weight()));
  CHECK(worst < 1e-12);
}

TEST_CASE("csv serialization round-trips totals") {
  auto q = sphere_quadrature(1, 2, 16);
  std::ostringstream out;
  write_csv(q, out);
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == "x1,y1,weight");
  Real total = 0.0;
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    auto pos = line.rfind(',');
    total += std::stod(line.substr(pos + 1));
    ++rows;
  }
  CHECK(rows == 16);
  CHECK(std::abs(total - 2.0 * kPi) < 1e-12);

  auto vq = ball_volume_quadrature(1, 4, q);
  std::ostringstream vout;
  write_csv(vq, vout);
  CHECK(vout.str().substr(0, 12) == "x1,y1,weight");
}
