// Acceptance suite: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "delaycert/error.hpp"
#include "delaycert/freqcheck.hpp"
#include "delaycert/goodwin.hpp"
#include "delaycert/simulate.hpp"
#include "delaycert/smalldelay.hpp"
#include "delaycert/spectrum.hpp"
#include "delaycert/transfer.hpp"
#include "oracles.hpp"

using namespace delaycert;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Matrix scalar(double v) { return Matrix::Constant(1, 1, v); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome transfer_exactness() {
  std::mt19937_64 rng(1001);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto start = Clock::now();
  double worst = 0.0;
  for (int s = 0; s < 10; ++s) {
    const double tau = 0.05 + 3.95 * u(rng);
    const double lambda = 0.05 + 0.95 * u(rng);
    const double rho = 0.5 * u(rng);
    const auto model = goodwin::build(tau, lambda, rho);
    for (int k = 0; k < 200; ++k) {
      const Complex p(-lambda + 4.0 * u(rng), -20.0 + 40.0 * u(rng));
      const Complex expected = -1.0 / (std::pow(lambda + p, 3) * std::exp(tau * p) + rho);
      const Complex got = eval_transfer(model.system, p)(0, 0);
      worst = std::max(worst, std::abs(got - expected) / std::abs(expected));
    }
  }
  const double elapsed = seconds_since(start);
  std::ostringstream os;
  os << "max relative error " << worst << " (< 1e-10), " << elapsed << " s (< 5 s)";
  return {worst < 1e-10 && elapsed < 5.0, os.str()};
}

Outcome smith_sup() {
  const auto model = goodwin::build(1.0, 1.0, 0.0);
  const Certificate c = smith_check(model.system, 0.5, 0.0);
  std::ostringstream os;
  os.precision(17);
  os << "sup " << c.sup_value << " (1 +- 1e-9), worst omega " << c.worst_omega << " (<= 1e-4)";
  return {std::abs(c.sup_value - 1.0) <= 1e-9 && std::abs(c.worst_omega) <= 1e-4, os.str()};
}

Outcome root_counting() {
  std::mt19937_64 rng(1003);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto start = Clock::now();
  int compared = 0, agreed = 0, skipped = 0;
  while (compared < 50) {
    const Index n = 1 + static_cast<Index>(rng() % 3);
    const double tau = 0.3 + 1.2 * std::abs(u(rng));
    const Matrix m0 = Matrix::NullaryExpr(n, n, [&] { return u(rng); });
    const Matrix m1 = Matrix::NullaryExpr(n, n, [&] { return u(rng); });
    const Matrix m2 = Matrix::NullaryExpr(n, n, [&] { return u(rng); });
    const double scale = 3.0 * std::abs(u(rng)) / (spectral_norm(m0) +
                                                   spectral_norm(m1) +
                                                   spectral_norm(m2));
    const double nu = 0.5 * std::abs(u(rng));
    const DelaySystem sys(tau,
                          DelayMeasure(n, n, {{0.0, m0 * scale}, {-0.5 * tau, m1 * scale}, {-tau, m2 * scale}}),
                          Matrix::Identity(n, 1), DelayMeasure::point(0.0, Matrix::Identity(1, n)));
    RootCount rc;
    try {
      rc = count_roots_right_of(sys, nu);
    } catch (const RootOnLine&) {
      ++skipped;
      continue;
    }
    const double r = root_box(sys, nu);
    const int expected = oracle::grid_winding([&](Complex p) { return oracle::atom_char_fn(sys, p); },
                                              -nu, r, -r, r, 600);
    agreed += rc.count == expected ? 1 : 0;
    ++compared;
  }

  // x'(t) = x(t - 1): one real root p = e^{-p} right of the imaginary axis.
  const DelaySystem unit_delay(1.0, DelayMeasure::point(-1.0, scalar(1.0)), scalar(1.0),
                               DelayMeasure::point(0.0, scalar(1.0)));
  const int j = count_roots_right_of(unit_delay, 0.0).count;
  double omega = 0.5;
  for (int i = 0; i < 200; ++i) omega = std::exp(-omega);
  const Complex root = newton_root(unit_delay, Complex(0.5, 0.0));
  const double elapsed = seconds_since(start);

  std::ostringstream os;
  os.precision(10);
  os << agreed << "/" << compared << " agree with the grid oracle (" << skipped
     << " skipped with a root on the line); unit delay j = " << j << ", root " << root.real()
     << " vs " << omega << ", " << elapsed << " s (< 60 s)";
  const bool ok = agreed == compared && j == 1 && std::abs(root.real() - 0.567143) <= 1e-6 &&
                  std::abs(root.real() - omega) <= 1e-10 && std::abs(root.imag()) <= 1e-10 &&
                  elapsed < 60.0;
  return {ok, os.str()};
}

DelaySystem random_scalar_plant(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double tau = 0.2 + 1.5 * std::abs(u(rng));
  return DelaySystem(tau,
                     DelayMeasure(1, 1, {{0.0, scalar(-1.5 + 0.5 * u(rng))}, {-tau, scalar(0.5 * u(rng))}},
                                  {{-tau, 0.0, {scalar(0.3 * u(rng))}}}),
                     scalar(u(rng)), DelayMeasure::point(-0.5 * tau * std::abs(u(rng)), scalar(1.0)));
}

Outcome checker_equivalence() {
  std::mt19937_64 rng(1004);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const DelaySystem sys = random_scalar_plant(rng);
    const double k1 = -std::abs(u(rng)), k2 = std::abs(u(rng));
    const Certificate c = circle_check(sys, k1, k2, 0.0);
    const FrequencyResult q = verify_frequency_condition(sys, sector_form(k1, k2), 0.0);
    worst = std::max(worst, std::abs(c.margin - (-q.sup)));
  }
  int agree = 0;
  for (int i = 0; i < 100; ++i) {
    const DelaySystem sys = random_scalar_plant(rng);
    const double lambda = 0.2 + 2.0 * std::abs(u(rng));
    const Certificate s = smith_check(sys, lambda, 0.0);
    Nonlinearity f = Nonlinearity::linear_gain(scalar(0.0));
    f.with_lipschitz({lambda, true});
    const Certificate q = certify(sys, f, 0.0, Mode::MSC);
    agree += s.verdict == q.verdict ? 1 : 0;
  }
  std::ostringstream os;
  os << "circle vs quadratic form margin difference " << worst << " (< 1e-10); smith vs lipschitz form verdicts "
     << agree << "/100";
  return {worst < 1e-10 && agree == 100, os.str()};
}

Outcome small_delay_constants() {
  const double threshold = small_delay_certificate(1, 1, 1.0, 0.1).threshold_frequency;
  const double ratio = std::sqrt(std::exp(1.0)) * std::sqrt(1.0 + std::exp(-2.0)) / 2.0;
  std::mt19937_64 rng(1005);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_excess = -INFINITY;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 3;
    const int r = 1 + static_cast<int>(rng() % 3);
    const double tau = 0.05 + u(rng);
    const double nu = u(rng) / tau;
    const double a = 0.1 * u(rng) + 1e-3;
    std::vector<DelayedReadout> readouts;
    for (int k = 0; k < r; ++k) readouts.push_back({static_cast<int>(rng() % n), tau * u(rng)});
    const DelaySystem plant = build_small_delay_plant(n, readouts, a, tau);
    const Certificate c = smith_check(plant, 1.0, nu);
    worst_excess = std::max(worst_excess, c.sup_value - small_delay_spectral_bound(r, nu, a, tau));
  }
  std::ostringstream os;
  os.precision(10);
  os << "threshold " << threshold << " (0.345258 +- 1e-6), ratio " << ratio
     << " (< 0.88), worst sup minus bound " << worst_excess << " (<= 0)";
  return {std::abs(threshold - 0.345258) <= 1e-6 && ratio < 0.88 && worst_excess <= 0.0, os.str()};
}

Outcome integrator() {
  const DelaySystem decay(1.0, DelayMeasure::point(0.0, scalar(-1.0)), scalar(0.0),
                          DelayMeasure::point(0.0, scalar(1.0)));
  const Nonlinearity zero = Nonlinearity::linear_gain(scalar(0.0));
  const History one = [](double) { return Vector::Constant(1, 1.0); };
  std::vector<double> errors;
  for (double h : {0.1, 0.05, 0.025}) {
    IntegrateOptions opts;
    opts.t_end = 1.0;
    opts.step = h;
    errors.push_back(std::abs(integrate(decay, zero, one, opts).value(1.0)(0) - std::exp(-1.0)));
  }
  double lo = INFINITY, hi = -INFINITY;
  for (std::size_t i = 1; i < errors.size(); ++i) {
    const double order = std::log2(errors[i - 1] / errors[i]);
    lo = std::min(lo, order);
    hi = std::max(hi, order);
  }

  const DelaySystem lagged(1.0, DelayMeasure::point(-1.0, scalar(-1.0)), scalar(0.0),
                           DelayMeasure::point(0.0, scalar(1.0)));
  IntegrateOptions opts;
  opts.t_end = 2.0;
  opts.step = 0.01;
  const Trace t = integrate(lagged, zero, one, opts);
  const double e1 = std::abs(t.value(1.0)(0));
  const double e2 = std::abs(t.value(2.0)(0) + 0.5);
  std::ostringstream os;
  os << "observed order in [" << lo << ", " << hi << "] (within [3.7, 4.3]); |x(1)| = " << e1
     << ", |x(2) + 0.5| = " << e2 << " (< 1e-10)";
  return {lo >= 3.7 && hi <= 4.3 && e1 < 1e-10 && e2 < 1e-10, os.str()};
}

Outcome region_scan_check() {
  goodwin::RegionConfig config;
  config.threads = static_cast<int>(std::clamp(std::thread::hardware_concurrency(), 1u, 8u));
  const auto start = Clock::now();
  const auto rows = goodwin::region_scan(config);
  const double elapsed = seconds_since(start);

  int certified = 0, recertified = 0, stable = 0, validated = 0;
  double slowest_rate = INFINITY, weakest_contraction = INFINITY;
  for (const auto& row : rows) {
    const auto& pt = row.point;
    if (!pt.certified()) continue;
    ++certified;
    const double rho = *pt.rho_star;
    const auto model = goodwin::build(pt.tau, pt.lambda, rho);
    SweepOptions fine = config.certify.sweep;
    fine.nodes *= 4;
    const Certificate c = circle_check(model.system, goodwin_min_slope() + rho, rho, 0.0, fine, Mode::MSC);
    recertified += c.verdict == Verdict::Certified ? 1 : 0;
    stable += count_roots_right_of(model.system, 0.0).count == 0 ? 1 : 0;
    goodwin::SimulationOptions sim;
    sim.seed = 1 + static_cast<std::uint64_t>(row.row * config.tau.count + row.col);
    const auto check = goodwin::validate_by_simulation(pt.tau, pt.lambda, sim);
    validated += check.min_contraction >= 1e3 && check.max_fixed_point_error <= 1e-4 ? 1 : 0;
    slowest_rate = std::min(slowest_rate, check.min_rate);
    weakest_contraction = std::min(weakest_contraction, check.min_contraction);
  }

  int monotone_rows = 0;
  for (int r = 0; r < config.lambda.count; ++r) {
    bool monotone = true;
    for (int c = 1; c < config.tau.count; ++c) {
      const bool prev = rows[r * config.tau.count + c - 1].point.certified();
      const bool here = rows[r * config.tau.count + c].point.certified();
      if (here && !prev) monotone = false;
    }
    monotone_rows += monotone ? 1 : 0;
  }
  const double monotone_share = static_cast<double>(monotone_rows) / config.lambda.count;

  std::ostringstream os;
  os << "scan " << elapsed << " s with " << config.threads << " worker(s) (< 300 s); " << certified
     << " certified; re-certified at 4x nodes " << recertified << ", j = 0 " << stable
     << ", simulation validated " << validated << " (weakest contraction " << weakest_contraction
     << ", slowest decay rate " << slowest_rate << "); monotone rows " << monotone_rows << "/"
     << config.lambda.count << " (>= 95%)";
  const bool ok = elapsed < 300.0 && certified > 0 && recertified == certified && stable == certified &&
                  validated == certified && monotone_share >= 0.95;
  return {ok, os.str()};
}

Outcome cone_invariance() {
  std::mt19937_64 rng(1008);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double lowest = INFINITY;
  for (int k = 0; k < 100; ++k) {
    const double tau = 0.05 + 3.95 * u(rng);
    const double lambda = 0.05 + 0.95 * u(rng);
    const auto model = goodwin::build(tau, lambda, 0.0);
    IntegrateOptions opts;
    opts.t_end = 30.0;
    opts.step = 0.01;
    const Trace t = integrate(model.system, model.nonlinearity, random_history(3, rng(), 0.0, 2.0), opts);
    for (const auto& x : t.states()) lowest = std::min(lowest, x.minCoeff());
  }
  std::ostringstream os;
  os << "lowest component " << lowest << " (>= -1e-12)";
  return {lowest >= -1e-12, os.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"transfer exactness (goodwin)", transfer_exactness},
      {"smith sup exactness", smith_sup},
      {"root counting vs oracle", root_counting},
      {"checker equivalence", checker_equivalence},
      {"small-delay constants", small_delay_constants},
      {"integrator", integrator},
      {"goodwin region scan", region_scan_check},
      {"cone invariance", cone_invariance},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("threw: ") + e.what()};
    }
    failures += out.pass ? 0 : 1;
    std::cout << (out.pass ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first << ": "
              << out.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
