#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "funtf/errors.hpp"
#include "funtf/frames.hpp"
#include "funtf/minimize.hpp"
#include "funtf/psd.hpp"
#include "test_support.hpp"

using namespace funtf;

namespace {

SymMatrix diag2(double a, double b) {
  SymMatrix m(2);
  m.set(0, 0, a);
  m.set(1, 1, b);
  return m;
}

// |M - sum v v^T| in the entrywise norm.
double residual_against(const SymMatrix& m, const std::vector<Vec>& vs) {
  const std::size_t n = m.dim();
  double r = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (const Vec& v : vs) s += v[i] * v[j];
      const double d = m(i, j) - s;
      r += d * d;
    }
  return std::sqrt(r);
}

}  // namespace

TEST_SUITE("psd") {

TEST_CASE("target norm from the trace") {
  CHECK(rho_target(diag2(1.0, 3.0)) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(rho_target(SymMatrix::identity(3)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(rho_target(diag2(-1.0, -1.0)), ArgumentError);
}

TEST_CASE("ellipsoid requires a positive definite form") {
  CHECK_THROWS_AS(Ellipsoid(diag2(1.0, 0.0)), ArgumentError);
  CHECK_THROWS_AS(Ellipsoid(diag2(1.0, -0.5)), ArgumentError);
  const Ellipsoid e(diag2(1.0, 3.0));
  CHECK(e.dim() == 2);
  CHECK(e.form()(1, 1) == 3.0);
}

TEST_CASE("equal-norm orthogonal points on a frozen 2d form") {
  const Ellipsoid e(diag2(1.0, 3.0));
  const auto zs = equal_norm_orthogonal(e);
  REQUIRE(zs.size() == 2);
  // expected points: (+-1/2, +-1/2) up to order and sign
  for (const Vec& z : zs) {
    CHECK(std::fabs(std::fabs(z[0]) - 0.5) <= 1e-9);
    CHECK(std::fabs(std::fabs(z[1]) - 0.5) <= 1e-9);
  }
  CHECK(std::fabs(dot(zs[0], zs[1])) <= 1e-9);
}

TEST_CASE("sphere short-circuit keeps the eigenbasis") {
  const auto zs = equal_norm_orthogonal(Ellipsoid(SymMatrix::scaled_identity(3, 2.0)));
  REQUIRE(zs.size() == 3);
  const double r = std::sqrt(0.5);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(std::fabs(zs[i][j] - (i == j ? r : 0.0)) <= 1e-12);
}

TEST_CASE("equal-norm orthogonal postconditions on random forms") {
  auto g = testsup::rng(10001);
  for (std::size_t n = 1; n <= 6; ++n) {
    for (int trial = 0; trial < 5; ++trial) {
      const SymMatrix m = testsup::random_pd(g, n, 0.2, 4.0);
      const double rho = rho_target(m);
      const auto zs = equal_norm_orthogonal(Ellipsoid(m));
      REQUIRE(zs.size() == n);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(std::fabs(norm(zs[i]) - rho) <= 1e-9);
        CHECK(std::fabs(testsup::quad(m, zs[i]) - 1.0) <= 1e-9);
        for (std::size_t j = i + 1; j < n; ++j) CHECK(std::fabs(dot(zs[i], zs[j])) <= 1e-9);
      }
    }
  }
}

TEST_CASE("peeling one rank-one term") {
  const auto [w, next] = deflate_once(diag2(3.0, 1.0));
  CHECK(std::fabs(std::fabs(w[0]) - 1.0) <= 1e-12);
  CHECK(std::fabs(w[1]) <= 1e-12);
  CHECK(std::fabs(next(0, 0) - 2.0) <= 1e-12);
  CHECK(std::fabs(next(1, 1) - 1.0) <= 1e-12);
  CHECK(std::fabs(next(0, 1)) <= 1e-12);
  CHECK(std::fabs(next.trace() - 3.0) <= 1e-12);
}

TEST_CASE("peeling a multiple of the identity") {
  const auto [w, next] = deflate_once(SymMatrix::scaled_identity(2, 2.0));
  CHECK(std::fabs(norm(w) - 1.0) <= 1e-12);
  CHECK(std::fabs(next.trace() - 3.0) <= 1e-12);
  const auto e = eigh_symmetric(next);
  CHECK(e.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("repeated peeling keeps psd and steps the trace down by one") {
  auto g = testsup::rng(10004);
  SymMatrix cur = testsup::random_psd_integer_trace(g, 3, 3, 6.0);
  for (int step = 0; step < 3; ++step) {
    const double before = cur.trace();
    auto [w, next] = deflate_once(cur);
    CHECK(std::fabs(norm(w) - 1.0) <= 1e-12);
    CHECK(std::fabs(next.trace() - (before - 1.0)) <= 1e-9);
    CHECK(eigh_symmetric(next).eigenvalues.front() >= -1e-10);
    cur = next;
  }
  CHECK(std::fabs(cur.trace() - 3.0) <= 1e-9);
}

TEST_CASE("peeling requires top eigenvalue at least one") {
  CHECK_THROWS_AS(deflate_once(SymMatrix::scaled_identity(2, 0.5)), ArgumentError);
  CHECK_THROWS_AS(deflate_once(diag2(2.0, -0.5)), NumericError);
}

TEST_CASE("decomposition of a frozen 2d matrix") {
  const auto dec = decompose_unit_norm(diag2(1.5, 0.5), 2);
  REQUIRE(dec.vectors.size() == 2);
  const double r3h = std::sqrt(3.0) / 2.0;
  for (const Vec& v : dec.vectors) {
    CHECK(std::fabs(norm(v) - 1.0) <= 1e-12);
    CHECK(std::fabs(std::fabs(v[0]) - r3h) <= 1e-9);
    CHECK(std::fabs(std::fabs(v[1]) - 0.5) <= 1e-9);
  }
  CHECK(dec.reconstruction_residual <= 1e-12);
  CHECK(residual_against(diag2(1.5, 0.5), dec.vectors) <= 1e-12);
}

TEST_CASE("decomposition of the identity is an orthonormal basis") {
  const auto dec = decompose_unit_norm(SymMatrix::identity(3), 3);
  REQUIRE(dec.vectors.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(std::fabs(norm(dec.vectors[i]) - 1.0) <= 1e-10);
    for (std::size_t j = i + 1; j < 3; ++j)
      CHECK(std::fabs(dot(dec.vectors[i], dec.vectors[j])) <= 1e-9);
  }
}

TEST_CASE("decomposition of a scaled identity gives a tight system") {
  const auto dec = decompose_unit_norm(SymMatrix::scaled_identity(2, 1.5), 3);
  REQUIRE(dec.vectors.size() == 3);
  const UnitVectorSystem sys(2, dec.vectors);
  CHECK(certify(sys).is_tight);
}

TEST_CASE("decomposition with several peeling steps") {
  auto g = testsup::rng(10002);
  for (int trial = 0; trial < 5; ++trial) {
    const SymMatrix m = testsup::random_psd_integer_trace(g, 3, 3, 5.0);
    const auto dec = decompose_unit_norm(m, 5);
    REQUIRE(dec.vectors.size() == 5);
    for (const Vec& v : dec.vectors) CHECK(std::fabs(norm(v) - 1.0) <= 1e-10);
    CHECK(dec.reconstruction_residual <= 1e-8 * (1.0 + hs_norm(m)));
  }
}

TEST_CASE("decomposition of a singular matrix stays in its range") {
  // rank 2 in R^3, trace 3
  SymMatrix m(3);
  m.set(0, 0, 2.0);
  m.set(1, 1, 1.0);
  const auto dec = decompose_unit_norm(m, 3);
  REQUIRE(dec.vectors.size() == 3);
  for (const Vec& v : dec.vectors) {
    CHECK(std::fabs(norm(v) - 1.0) <= 1e-10);
    CHECK(std::fabs(v[2]) <= 1e-9);
  }
  CHECK(dec.reconstruction_residual <= 1e-8 * (1.0 + hs_norm(m)));
}

TEST_CASE("decomposition rejects bad inputs") {
  CHECK_THROWS_AS(decompose_unit_norm(diag2(1.5, 0.5), 3), ArgumentError);   // trace 2 != 3
  CHECK_THROWS_AS(decompose_unit_norm(diag2(2.0, -1.0), 1), ArgumentError);  // not psd
  CHECK_THROWS_AS(decompose_unit_norm(diag2(1.5, 0.5), 0), ArgumentError);   // no terms
  // trace 1 but rank 3: fewer terms than the rank can carry
  SymMatrix low(3);
  low.set(0, 0, 0.4);
  low.set(1, 1, 0.3);
  low.set(2, 2, 0.3);
  CHECK_THROWS_AS(decompose_unit_norm(low, 1), ArgumentError);
}

TEST_CASE("decomposition is deterministic") {
  auto g = testsup::rng(10003);
  const SymMatrix m = testsup::random_psd_integer_trace(g, 4, 4, 6.0);
  const auto a = decompose_unit_norm(m, 6);
  const auto b = decompose_unit_norm(m, 6);
  REQUIRE(a.vectors.size() == b.vectors.size());
  for (std::size_t i = 0; i < a.vectors.size(); ++i)
    for (std::size_t k = 0; k < 4; ++k) CHECK(a.vectors[i][k] == b.vectors[i][k]);
}

TEST_CASE("round trip through a minimized frame operator") {
  const auto reps = minimize_random_starts(3, 5, 1, 777);
  REQUIRE(reps.size() == 1);
  REQUIRE(reps[0].converged);
  const SymMatrix s = frame_operator(reps[0].final_system);
  const auto dec = decompose_unit_norm(s, 5);
  CHECK(residual_against(s, dec.vectors) <= 1e-8);
}

}  // TEST_SUITE
