#include <doctest.h>

#include <numbers>
#include <random>

#include "delaycert/error.hpp"
#include "delaycert/goodwin.hpp"
#include "delaycert/spectrum.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace delaycert;
using testing::scalar;
using testing::scalar_plant;

TEST_CASE("char_fn on scalar plants") {
  const DelaySystem decay(1.0, DelayMeasure::point(0.0, scalar(-1.0)), scalar(1.0),
                          DelayMeasure::point(0.0, scalar(1.0)));
  const Complex p(0.3, 1.2);
  CHECK(std::abs(char_fn(decay, p) - (-1.0 - p)) < 1e-15);

  const DelaySystem lag = scalar_plant({{1.0, 1.0}}, 1.0);
  CHECK(std::abs(char_fn(lag, p) - (std::exp(-p) - p)) < 1e-15);
  const Complex root = newton_root(lag, Complex(0.5, 0.0));
  CHECK(root.real() == doctest::Approx(0.5671432904097838).epsilon(1e-13));
  CHECK(std::abs(char_fn(lag, root)) < 1e-14);
}

TEST_CASE("goodwin characteristic zeros are roots of (lambda+p)^3 + rho e^{-tau p}") {
  const double tau = 1.0, lambda = 1.0, rho = 2.0;
  const auto model = goodwin::build(tau, lambda, rho);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 50; ++i) {
    const Complex p(u(rng), u(rng));
    const Complex q = std::pow(lambda + p, 3) + rho * std::exp(-tau * p);
    // det(alpha - pI) = -((lambda + p)^3 + rho e^{-tau p})
    CHECK(std::abs(char_fn(model.system, p) + q) <= 1e-12 * std::max(1.0, std::abs(q)));
  }
  const Complex root = newton_root(model.system, Complex(0.2, 1.0));
  CHECK(std::abs(std::pow(lambda + root, 3) + rho * std::exp(-tau * root)) < 1e-12);
}

TEST_CASE("root_box") {
  const DelaySystem decay(1.0, DelayMeasure::point(0.0, scalar(-1.0)), scalar(1.0),
                          DelayMeasure::point(0.0, scalar(1.0)));
  CHECK(root_box(decay, 0.0) == 2.0);
  CHECK(root_box(scalar_plant({{1.0, 1.0}}, 1.0), 0.0) == 2.0);
  CHECK(root_box(scalar_plant({{1.0, 1.0}}, 1.0), 1.0) == doctest::Approx(std::exp(1.0) + 1.0));

  const auto model = goodwin::build(1.0, 1.0, 2.0);
  const double r = root_box(model.system, 0.0);
  // no right-half-plane roots outside |p| <= R - 1
  const int outer = oracle::grid_winding([&](Complex p) { return oracle::atom_char_fn(model.system, p); },
                                         0.0, 3.0 * r, -3.0 * r, 3.0 * r, 600);
  const int inner = oracle::grid_winding([&](Complex p) { return oracle::atom_char_fn(model.system, p); },
                                         0.0, r, -r, r, 600);
  CHECK(outer == inner);
}

TEST_CASE("count_roots_right_of on reference plants") {
  const DelaySystem decay(1.0, DelayMeasure::point(0.0, scalar(-1.0)), scalar(1.0),
                          DelayMeasure::point(0.0, scalar(1.0)));
  CHECK(count_roots_right_of(decay, 0.0).count == 0);
  const RootCount lag = count_roots_right_of(scalar_plant({{1.0, 1.0}}, 1.0), 0.0);
  CHECK(lag.count == 1);
  CHECK(lag.winding_residual < 0.05);
  CHECK(lag.contour[1].real() == 2.0);
  CHECK_THROWS_AS(count_roots_right_of(scalar_plant({{1.0, -std::numbers::pi / 2.0}}, 1.0), 0.0),
                  RootOnLine);
}

TEST_CASE("counts change by the multiplicity when the line crosses a root") {
  // x1' = -x1, x2' = x1 - x2: double root at -1
  Matrix a(2, 2);
  a << -1.0, 0.0, 1.0, -1.0;
  const DelaySystem chain(1.0, DelayMeasure::point(0.0, a), Matrix::Identity(2, 1),
                          DelayMeasure::point(0.0, Matrix::Identity(1, 2)));
  CHECK(count_roots_right_of(chain, 0.9).count == 0);
  CHECK(count_roots_right_of(chain, 1.1).count == 2);

  // rho = 0: -(lambda + p)^3, a triple root at -lambda
  const auto model = goodwin::build(0.5, 1.0, 0.0);
  CHECK(count_roots_right_of(model.system, 0.95).count == 0);
  CHECK(count_roots_right_of(model.system, 1.05).count == 3);
}

TEST_CASE("count is stable under tighter quadrature") {
  const auto model = goodwin::build(2.0, 0.5, 0.9);
  RootCountOptions fine;
  fine.initial_tolerance = 1e-10;
  fine.edge_samples = 8192;
  CHECK(count_roots_right_of(model.system, 0.0).count == count_roots_right_of(model.system, 0.0, fine).count);
}

TEST_CASE("count_roots_right_of agrees with the grid winding oracle") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int compared = 0;
  while (compared < 10) {
    const Index n = 1 + static_cast<Index>(rng() % 3);
    const double tau = 0.5 + std::abs(u(rng));
    Matrix m0 = Matrix::NullaryExpr(n, n, [&] { return u(rng); });
    Matrix m1 = Matrix::NullaryExpr(n, n, [&] { return u(rng); });
    const double scale = 3.0 / (spectral_norm(m0) + spectral_norm(m1)) * std::abs(u(rng));
    const DelaySystem sys(tau, DelayMeasure(n, n, {{0.0, m0 * scale}, {-tau, m1 * scale}}),
                          Matrix::Identity(n, 1), DelayMeasure::point(0.0, Matrix::Identity(1, n)));
    RootCount rc;
    try {
      rc = count_roots_right_of(sys, 0.0);
    } catch (const RootOnLine&) {
      continue;
    }
    const double r = root_box(sys, 0.0);
    const int expected = oracle::grid_winding([&](Complex p) { return oracle::atom_char_fn(sys, p); },
                                              0.0, r, -r, r, 600);
    CHECK(rc.count == expected);
    ++compared;
  }
}
