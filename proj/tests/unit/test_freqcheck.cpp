#include <doctest.h>

#include <random>

#include "delaycert/error.hpp"
#include "delaycert/freqcheck.hpp"
#include "delaycert/goodwin.hpp"
#include "delaycert/smalldelay.hpp"
#include "delaycert/transfer.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace delaycert;
using testing::scalar;
using testing::scalar_plant;

namespace {

DelaySystem first_order() {
  return DelaySystem(1.0, DelayMeasure::point(0.0, scalar(-1.0)), scalar(1.0),
                     DelayMeasure::point(0.0, scalar(1.0)));
}

double circle_value(double k1, double k2, Complex w) {
  return -(std::conj(1.0 + k1 * w) * (1.0 + k2 * w)).real();
}

}  // namespace

TEST_CASE("hermitian_form_at") {
  ComplexMatrix w(2, 1);
  w << Complex(0.3, -0.2), Complex(-1.0, 0.5);
  const ComplexMatrix h = hermitian_form_at(lipschitz_form(1.5, 2, 1), w);
  const ComplexMatrix expected = 2.25 * w.adjoint() * w - ComplexMatrix::Identity(1, 1);
  CHECK((h - expected).norm() < 1e-15);

  const QuadForm f(Matrix::Identity(2, 2), Matrix::Ones(1, 2), -3.0 * Matrix::Identity(1, 1));
  CHECK((hermitian_form_at(f, ComplexMatrix::Zero(2, 1)) - f.g_xi().cast<Complex>()).norm() == 0.0);
  CHECK_THROWS_AS(hermitian_form_at(f, ComplexMatrix::Zero(1, 1)), DimensionError);

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    const double k1 = u(rng), k2 = k1 + std::abs(u(rng));
    ComplexMatrix z(1, 1);
    z(0, 0) = Complex(u(rng), u(rng));
    CHECK(lambda_max(hermitian_form_at(sector_form(k1, k2), z)) ==
          doctest::Approx(circle_value(k1, k2, z(0, 0))).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("lambda_max") {
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = -1.0;
  d(1, 1) = -2.0;
  CHECK(lambda_max(d) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(lambda_max(ComplexMatrix::Constant(1, 1, 0.5)) == 0.5);
  ComplexMatrix x(2, 2);
  x << 0.0, 1.0, 1.0, 0.0;
  CHECK(lambda_max(x) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("tail cap of the first-order lag") {
  const DelaySystem sys = first_order();
  CHECK(transfer_tail_norm(sys, 0.0, 3.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(tail_cap(sys, lipschitz_form(1.0, 1, 1), 0.0, 3.0) == doctest::Approx(-0.75).epsilon(1e-15));
  // true sup over |omega| > 3 is 1/(1 + 9) - 1
  CHECK(1.0 / 10.0 - 1.0 <= -0.75);
  try {
    tail_cap(sys, lipschitz_form(1.0, 1, 1), 0.0, 1.0);
    FAIL("expected OmegaTooSmall");
  } catch (const OmegaTooSmall& e) {
    CHECK(e.minimal_omega() == 1.0);
  }
}

TEST_CASE("goodwin tail cap bounds the true tail") {
  const auto model = goodwin::build(1.0, 1.0, 0.0);
  const QuadForm form = lipschitz_form(1.0, 1, 1);
  const double cap = tail_cap(model.system, form, 0.0, 10.0);
  CHECK(cap < 0.0);
  double tail = -INFINITY;
  for (int i = 0; i <= 100000; ++i) {
    const double w = 10.0 + 990.0 * i / 100000.0;
    tail = std::max(tail, lambda_max(hermitian_form_at(form, eval_transfer(model.system, Complex(0.0, w)))));
  }
  CHECK(tail <= cap);
}

TEST_CASE("goodwin lipschitz sweep peaks at omega = 0") {
  for (double tau : {0.3, 1.0, 3.0}) {
    const auto model = goodwin::build(tau, 1.0, 0.0);
    for (double lambda : {0.5, 0.9, 1.3}) {
      const FrequencyResult r = verify_frequency_condition(model.system, lipschitz_form(lambda, 1, 1), 0.0);
      CHECK(r.sup == doctest::Approx(lambda * lambda - 1.0).epsilon(1e-12).scale(1.0));
      CHECK(r.worst_omega < 1e-4);
      CHECK(r.tail_bound < 0.0);
    }
  }
}

TEST_CASE("adaptive sweep matches a million-node grid") {
  const double rho = 0.4;
  const auto model = goodwin::build(1.0, 0.5, rho);
  const double k1 = goodwin_min_slope() + rho, k2 = rho;
  const FrequencyResult r = verify_frequency_condition(model.system, sector_form(k1, k2), 0.0);
  const auto [grid, at] = oracle::grid_max(
      [&](double w) { return circle_value(k1, k2, eval_transfer(model.system, Complex(0.0, w))(0, 0)); },
      r.sweep.omega_cap, 1000000);
  CHECK(std::abs(r.sup - grid) < 1e-7 * grid);
  CHECK(r.sup >= grid - 1e-9);
  CHECK(std::abs(r.worst_omega - at) < 1e-2);
}

TEST_CASE("smith check") {
  const auto model = goodwin::build(1.0, 1.0, 0.0);
  const Certificate ok = smith_check(model.system, 0.9, 0.0);
  CHECK(ok.verdict == Verdict::Certified);
  CHECK(ok.sup_value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ok.margin == doctest::Approx(1.0 / 0.9 - 1.0).epsilon(1e-12));
  CHECK(ok.worst_omega < 1e-4);
  CHECK(ok.j == 0);
  CHECK(ok.kind == CertificateKind::Stability);

  const Certificate tight = smith_check(model.system, 1.0, 0.0);
  CHECK(tight.verdict == Verdict::Rejected);
  CHECK(tight.margin <= 0.0);

  // x' = x(t - 1): one unstable root, the sweep still reports a margin
  const Certificate unstable = smith_check(scalar_plant({{1.0, 1.0}}, 1.0), 0.5, 0.0);
  CHECK(unstable.j == 1);
  CHECK(unstable.kind == CertificateKind::InertialManifold);
  double grid = 0.0;
  for (int i = 0; i <= 200000; ++i)
    grid = std::max(grid, std::abs(eval_transfer(scalar_plant({{1.0, 1.0}}, 1.0),
                                                 Complex(0.0, unstable.sweep.omega_cap * i / 200000.0))(0, 0)));
  CHECK(unstable.sup_value >= grid - 1e-9);
  CHECK(unstable.margin == doctest::Approx(2.0 - unstable.sup_value));
}

TEST_CASE("circle check on trivial plants") {
  const DelaySystem zero_gain(1.0, DelayMeasure::point(0.0, scalar(-1.0)), scalar(0.0),
                              DelayMeasure::point(0.0, scalar(1.0)));
  const Certificate c = circle_check(zero_gain, -0.5, 0.5, 0.0);
  CHECK(c.verdict == Verdict::Certified);
  CHECK(c.margin == doctest::Approx(1.0));
  const Certificate d = circle_check(first_order(), 0.0, 0.0, 0.0);
  CHECK(d.verdict == Verdict::Certified);
  CHECK(d.margin == doctest::Approx(1.0));
  CHECK_THROWS_AS(circle_check(first_order(), 0.5, 1.0, 0.0, {}, Mode::SC), ConfigError);
  CHECK_THROWS_AS(circle_check(first_order(), 1.0, 0.5, 0.0), ConfigError);
}

TEST_CASE("circle check on the shifted goodwin chain matches a dense grid") {
  const double rho = 0.3;
  const auto model = goodwin::build(1.0, 1.0, rho);
  const double k1 = goodwin_min_slope() + rho, k2 = rho;
  const Certificate c = circle_check(model.system, k1, k2, 0.0);
  const auto [grid, at] = oracle::grid_max(
      [&](double w) { return circle_value(k1, k2, eval_transfer(model.system, Complex(0.0, w))(0, 0)); },
      c.sweep.omega_cap, 1000000);
  CHECK(c.margin == doctest::Approx(-grid).epsilon(1e-8));
  CHECK(c.verdict == Verdict::Certified);
  CHECK(c.j == 0);
}

TEST_CASE("circle check and the quadratic form path agree") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 25; ++i) {
    const double tau = 0.5 + std::abs(u(rng));
    const DelaySystem sys(tau, DelayMeasure(1, 1, {{0.0, scalar(-1.5 + 0.5 * u(rng))}, {-tau, scalar(0.5 * u(rng))}}),
                          scalar(u(rng)), DelayMeasure::point(-0.5 * tau * std::abs(u(rng)), scalar(1.0)));
    const double k1 = u(rng), k2 = k1 + std::abs(u(rng));
    const FrequencyResult a = circle_frequency(sys, k1, k2, 0.0);
    const FrequencyResult b = verify_frequency_condition(sys, sector_form(k1, k2), 0.0);
    CHECK(a.sup == doctest::Approx(b.sup).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("smith check and the lipschitz form agree") {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 25; ++i) {
    const double tau = 0.5 + std::abs(u(rng));
    const DelaySystem sys(tau, DelayMeasure(1, 1, {{0.0, scalar(-1.5 + 0.5 * u(rng))}, {-tau, scalar(0.5 * u(rng))}}),
                          scalar(u(rng)), DelayMeasure::point(0.0, scalar(1.0)));
    const double lambda = 0.5 + 2.0 * std::abs(u(rng));
    const Certificate s = smith_check(sys, lambda, 0.0);
    const FrequencyResult f = verify_frequency_condition(sys, lipschitz_form(lambda, 1, 1), 0.0);
    CHECK((s.verdict == Verdict::Certified) == (-f.sup > kStrictMargin));
    CHECK(f.sup == doctest::Approx(lambda * lambda * s.sup_value * s.sup_value - 1.0).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("larger constants never turn a rejection into a certificate") {
  const auto model = goodwin::build(1.0, 0.8, 0.0);
  bool rejected = false;
  for (double lambda = 0.2; lambda < 3.0; lambda += 0.2) {
    const Verdict v = smith_check(model.system, lambda, 0.0).verdict;
    if (rejected) CHECK(v != Verdict::Certified);
    rejected = rejected || v == Verdict::Rejected;
  }
  const auto shifted = goodwin::build(2.0, 0.7, 0.2);
  rejected = false;
  for (double widen = 0.0; widen < 2.0; widen += 0.1) {
    const Verdict v = circle_check(shifted.system, -0.5 - widen, 0.2 + widen, 0.0).verdict;
    if (rejected) CHECK(v != Verdict::Certified);
    rejected = rejected || v == Verdict::Rejected;
  }
  CHECK(rejected);
}

TEST_CASE("conjugate symmetry of the swept objective") {
  const auto model = goodwin::build(1.3, 0.6, 0.2);
  const QuadForm form = sector_form(-0.7, 0.2);
  for (double w : {0.0, 0.3, 1.7, 12.0}) {
    const double a = lambda_max(hermitian_form_at(form, eval_transfer(model.system, Complex(-0.1, w))));
    const double b = lambda_max(hermitian_form_at(form, eval_transfer(model.system, Complex(-0.1, -w))));
    CHECK(std::abs(a - b) <= 1e-13);
  }
}

TEST_CASE("certify") {
  Nonlinearity f = Nonlinearity::expression(expr::parse_expression("tanh(sigma)"));
  f.with_sector({-1.0, 1.0, false});
  const DelaySystem zero_gain(1.0, DelayMeasure::point(0.0, scalar(-1.0)), scalar(0.0),
                              DelayMeasure::point(0.0, scalar(1.0)));
  const Certificate c = certify(zero_gain, f, 0.0, Mode::SC);
  CHECK(c.verdict == Verdict::Certified);
  CHECK(c.kind == CertificateKind::Stability);
  CHECK(c.j == 0);
  CHECK_THROWS_AS(certify(zero_gain, f, 0.0, Mode::MSC), ConfigError);

  const goodwin::Point best = goodwin::certify(0.2, 1.0);
  REQUIRE(best.rho_star);
  const auto model = goodwin::build(0.2, 1.0, *best.rho_star);
  const Certificate g = certify(model.system, model.nonlinearity, 0.0, Mode::MSC);
  CHECK(g.verdict == Verdict::Certified);
  CHECK(g.j == 0);
  CHECK(g.margin == doctest::Approx(best.margin).epsilon(1e-10));
  // g(0) = 1, so the pointwise sector condition does not apply
  CHECK_THROWS_AS(certify(model.system, model.nonlinearity, 0.0, Mode::SC), ConfigError);
}

TEST_CASE("root on the line makes certify inconclusive") {
  Nonlinearity f = Nonlinearity::linear_gain(scalar(0.0));
  f.with_lipschitz({0.1, true});
  const Certificate c = certify(scalar_plant({{1.0, -std::numbers::pi / 2.0}}, 1.0), f, 0.0, Mode::MSC);
  CHECK(c.verdict == Verdict::Inconclusive);
  CHECK(c.note.find("perturb nu") != std::string::npos);
}

TEST_CASE("small-delay plant far beyond the threshold is rejected") {
  const double threshold = small_delay_certificate(1, 1, 1.0, 0.1).threshold_frequency;
  const double tau = 10.0 * threshold;
  const DelaySystem plant = build_small_delay_plant(1, {{0, tau}}, 0.0, tau);
  Nonlinearity f = Nonlinearity::linear_gain(Matrix::Zero(1, 2));
  f.with_lipschitz({1.0, true});
  const Certificate c = certify(plant, f, 1.0 / tau, Mode::MSC);
  CHECK(c.verdict == Verdict::Rejected);
}
