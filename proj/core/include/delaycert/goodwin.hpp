#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "delaycert/freqcheck.hpp"
#include "delaycert/nonlinearity.hpp"
#include "delaycert/system.hpp"

namespace delaycert::goodwin {

struct Model {
  DelaySystem system;
  Nonlinearity nonlinearity;
};

// Goodwin chain in Lur'e form with the rho-shift:
//   x1' = -lambda x1 - rho x3(t - tau) + g_rho(x3(t - tau))
//   x2' = -lambda x2 + x1
//   x3' = -lambda x3 + x2
// with g_rho(s) = 1/(1 + |s|^3) + rho s, B = e1 and C x_t = x3(t - tau).
// `coupled = false` drops the x1 -> x2 -> x3 coupling terms.
Model build(double tau, double lambda, double rho, bool coupled = true);

// Unique theta in (0, pi/3) with tau lambda tan(theta) = pi - 3 theta.
double solve_theta(double tau, double lambda);

// (lambda / cos theta)^3: below this rho every root of
// (lambda + p)^3 + rho exp(-tau p) lies in Re p < 0.
double rho_cap(double tau, double lambda);

// Upper end of the admissible rho range, 2 cbrt(2) / 3.
inline double rho_limit() { return -goodwin_min_slope(); }

// Stationary point of the unshifted chain: lambda^3 x3 (1 + x3^3) = 1,
// x2 = lambda x3, x1 = lambda x2.
std::array<double, 3> fixed_point(double lambda);

struct CertifyOptions {
  int rho_grid = 64;
  SweepOptions sweep;
  bool coupled = true;
};

struct Point {
  double tau = 0.0;
  double lambda = 0.0;
  double theta = 0.0;
  double rho_cap = 0.0;
  std::optional<double> rho_star;
  double margin = 0.0;  // best circle-criterion margin over the rho grid
  std::optional<Certificate> certificate;
  std::array<double, 3> fixed_point{};
  std::string reason;  // "certified", "no_rho_passed", "unstable_roots", "inconclusive"

  bool certified() const { return rho_star.has_value(); }
};

// Scans rho over a uniform grid on [0, min(2 cbrt(2)/3, rho_cap) (1 - 1e-6)],
// runs the circle criterion with sector (-2 cbrt(2)/3 + rho, rho) at nu = 0
// for each rho, and keeps the largest positive margin whose root count is 0.
Point certify(double tau, double lambda, const CertifyOptions& options = {});

struct SimulationCheck {
  int pairs = 0;
  double min_contraction = 0.0;       // min over pairs of d(0) / d(t_end)
  double max_fixed_point_error = 0.0;  // max |x(t_end) - x*|_inf over all runs
  double min_rate = 0.0;               // min fitted decay rate of the pair distance
  bool monotone = true;                // pair distances non-increasing at multiples of tau
  bool passed = false;                 // contraction >= 1e3, error <= 1e-4, rate > 0
};

struct SimulationOptions {
  int pairs = 5;
  std::uint64_t seed = 1;
  double t_end = 60.0;
  double step = 0.01;
  bool coupled = true;
};

// Integrates pairs of trajectories from random positive histories and
// measures how fast they merge and how close they end to the fixed point.
SimulationCheck validate_by_simulation(double tau, double lambda,
                                       const SimulationOptions& options = {});

struct Range {
  double lo = 0.0;
  double hi = 0.0;
  int count = 2;

  double at(int i) const { return count == 1 ? lo : lo + (hi - lo) * i / (count - 1); }
};

struct RegionConfig {
  Range tau{0.05, 4.0, 41};
  Range lambda{0.05, 1.0, 21};
  CertifyOptions certify;
  int threads = 1;
};

struct RegionRow {
  int row = 0;  // lambda index
  int col = 0;  // tau index
  Point point;
};

// Grid scan ordered by (row, col) regardless of thread count.
std::vector<RegionRow> region_scan(const RegionConfig& config);

}  // namespace delaycert::goodwin
