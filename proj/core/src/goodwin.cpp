#include "delaycert/goodwin.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include "delaycert/error.hpp"
#include "delaycert/simulate.hpp"
#include "delaycert/spectrum.hpp"

namespace delaycert::goodwin {

Model build(double tau, double lambda, double rho, bool coupled) {
  if (!(tau > 0.0) || !(lambda > 0.0)) throw ConfigError("goodwin needs tau, lambda > 0");
  if (!(rho >= 0.0)) throw ConfigError("goodwin needs rho >= 0");
  Matrix a0 = -lambda * Matrix::Identity(3, 3);
  if (coupled) {
    a0(1, 0) = 1.0;
    a0(2, 1) = 1.0;
  }
  std::vector<Atom> a_atoms{{0.0, a0}};
  if (rho > 0.0) {
    Matrix shift = Matrix::Zero(3, 3);
    shift(0, 2) = -rho;
    a_atoms.push_back({-tau, shift});
  }
  Matrix b = Matrix::Zero(3, 1);
  b(0, 0) = 1.0;
  Matrix c_row = Matrix::Zero(1, 3);
  c_row(0, 2) = 1.0;
  return Model{DelaySystem(tau, DelayMeasure(3, 3, std::move(a_atoms)), std::move(b),
                           DelayMeasure::point(-tau, c_row)),
               Nonlinearity::goodwin(rho)};
}

double solve_theta(double tau, double lambda) {
  const double k = tau * lambda;
  if (!(k > 0.0)) throw ConfigError("solve_theta needs tau * lambda > 0");
  // f(theta) = k tan(theta) - (pi - 3 theta) increases from -pi at 0.
  auto f = [k](double th) { return k * std::tan(th) - (std::numbers::pi - 3.0 * th); };
  double lo = 0.0;
  double hi = std::numbers::pi / 3.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return std::abs(f(lo)) < std::abs(f(hi)) ? lo : hi;
}

double rho_cap(double tau, double lambda) {
  const double q = lambda / std::cos(solve_theta(tau, lambda));
  return q * q * q;
}

std::array<double, 3> fixed_point(double lambda) {
  if (!(lambda > 0.0)) throw ConfigError("fixed_point needs lambda > 0");
  const double l3 = lambda * lambda * lambda;
  auto f = [l3](double x) { return l3 * x * (1.0 + x * x * x) - 1.0; };
  double lo = 0.0;
  double hi = 1.0 / l3;  // f(hi) >= 0
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  const double x3 = std::abs(f(lo)) < std::abs(f(hi)) ? lo : hi;
  const double x2 = lambda * x3;
  return {lambda * x2, x2, x3};
}

Point certify(double tau, double lambda, const CertifyOptions& options) {
  Point pt;
  pt.tau = tau;
  pt.lambda = lambda;
  pt.theta = solve_theta(tau, lambda);
  pt.rho_cap = rho_cap(tau, lambda);
  pt.fixed_point = fixed_point(lambda);

  const int grid = std::max(options.rho_grid, 1);
  const double upper = std::min(rho_limit(), pt.rho_cap) * (1.0 - 1e-6);
  struct Candidate {
    double rho;
    double margin;
  };
  std::vector<Candidate> candidates;
  bool any_error = false;
  double best_margin = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid; ++i) {
    const double rho = grid == 1 ? 0.0 : upper * i / (grid - 1);
    const Model model = build(tau, lambda, rho, options.coupled);
    try {
      const FrequencyResult r =
          circle_frequency(model.system, goodwin_min_slope() + rho, rho, 0.0, options.sweep);
      const double margin = -r.sup;
      best_margin = std::max(best_margin, margin);
      if (margin > kStrictMargin) candidates.push_back({rho, margin});
    } catch (const Error&) {
      any_error = true;
    }
  }
  pt.margin = best_margin;
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) { return a.margin > b.margin; });

  bool saw_unstable = false;
  for (const auto& cand : candidates) {
    const Model model = build(tau, lambda, cand.rho, options.coupled);
    Certificate cert = circle_check(model.system, goodwin_min_slope() + cand.rho, cand.rho, 0.0,
                                    options.sweep, Mode::MSC);
    if (cert.verdict == Verdict::Certified && cert.j && *cert.j == 0) {
      pt.rho_star = cand.rho;
      pt.margin = cert.margin;
      pt.certificate = std::move(cert);
      pt.reason = "certified";
      return pt;
    }
    if (cert.j && *cert.j > 0) saw_unstable = true;
  }
  if (saw_unstable)
    pt.reason = "unstable_roots";
  else if (any_error)
    pt.reason = "inconclusive";
  else
    pt.reason = "no_rho_passed";
  return pt;
}

SimulationCheck validate_by_simulation(double tau, double lambda,
                                       const SimulationOptions& options) {
  if (options.pairs < 1) throw ConfigError("validation needs at least one pair");
  const Model model = build(tau, lambda, 0.0, options.coupled);
  const auto star = fixed_point(lambda);
  const Vector target = Eigen::Map<const Vector>(star.data(), 3);
  IntegrateOptions io;
  io.t_end = options.t_end;
  io.step = options.step;

  SimulationCheck out;
  out.pairs = options.pairs;
  out.min_contraction = std::numeric_limits<double>::infinity();
  out.min_rate = std::numeric_limits<double>::infinity();
  for (int k = 0; k < options.pairs; ++k) {
    const std::uint64_t s = options.seed * 1000003ULL + 2ULL * static_cast<std::uint64_t>(k);
    const Trace a = integrate(model.system, model.nonlinearity, random_history(3, s), io);
    const Trace b = integrate(model.system, model.nonlinearity, random_history(3, s + 1), io);
    const double d0 = segment_distance(a, b, 0.0);
    const double d1 = segment_distance(a, b, a.t_end());
    out.min_contraction = std::min(out.min_contraction,
                                   d1 > 0.0 ? d0 / d1 : std::numeric_limits<double>::infinity());
    for (const Trace* t : {&a, &b})
      out.max_fixed_point_error = std::max(
          out.max_fixed_point_error, (t->states().back() - target).lpNorm<Eigen::Infinity>());
    double prev = d0;
    for (double t = tau; t <= a.t_end() + 1e-12; t += tau) {
      const double d = segment_distance(a, b, t);
      if (d > prev * (1.0 + 1e-9) + 1e-15) out.monotone = false;
      prev = d;
    }
    double rate = 0.0;
    try {
      rate = fit_decay_rate(a, b, std::min(tau, 0.5 * a.t_end()), a.t_end()).rate;
    } catch (const DifferenceUnderflow&) {
      // Merged within one delay: faster than any window can resolve.
      rate = std::numeric_limits<double>::infinity();
    }
    out.min_rate = std::min(out.min_rate, rate);
  }
  out.passed = out.min_contraction >= 1e3 && out.max_fixed_point_error <= 1e-4 && out.min_rate > 0.0;
  return out;
}

std::vector<RegionRow> region_scan(const RegionConfig& config) {
  if (config.tau.count < 1 || config.lambda.count < 1) throw ConfigError("empty region grid");
  if (!(config.tau.lo > 0.0) || !(config.lambda.lo > 0.0) || config.tau.hi < config.tau.lo ||
      config.lambda.hi < config.lambda.lo)
    throw ConfigError("region ranges must be positive and increasing");
  const int rows = config.lambda.count;
  const int cols = config.tau.count;
  std::vector<RegionRow> out(static_cast<std::size_t>(rows) * cols);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int idx = next++; idx < rows * cols; idx = next++) {
      const int row = idx / cols;
      const int col = idx % cols;
      out[idx].row = row;
      out[idx].col = col;
      try {
        out[idx].point = certify(config.tau.at(col), config.lambda.at(row), config.certify);
      } catch (const Error& e) {
        out[idx].point.tau = config.tau.at(col);
        out[idx].point.lambda = config.lambda.at(row);
        out[idx].point.reason = e.code();
      }
    }
  };
  const int threads = std::max(1, config.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return out;
}

}  // namespace delaycert::goodwin
