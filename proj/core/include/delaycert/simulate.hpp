#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "delaycert/nonlinearity.hpp"
#include "delaycert/system.hpp"
#include "delaycert/types.hpp"

namespace delaycert {

using History = std::function<Vector(double)>;
using Forcing = std::function<Vector(double)>;

// Dense solution of a delay equation on [t0 - tau, t_end]: the initial
// history on [t0 - tau, t0] and a cubic Hermite interpolant through the
// RK4 nodes on [t0, t_end].
class Trace {
 public:
  Trace(double t0, double step, double tau, History history, std::vector<Vector> states,
        std::vector<Vector> derivatives);

  double t0() const { return t0_; }
  double t_end() const { return t0_ + step_ * (static_cast<double>(states_.size()) - 1); }
  double step() const { return step_; }
  double tau() const { return tau_; }
  Index dim() const { return states_.front().size(); }
  std::size_t size() const { return states_.size(); }

  double time(std::size_t k) const { return t0_ + step_ * static_cast<double>(k); }
  const std::vector<Vector>& states() const { return states_; }
  const std::vector<Vector>& derivatives() const { return derivatives_; }

  // Multiples of the discrete lags that fall on the grid, from t0 to t_end.
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  void set_breakpoints(std::vector<double> b) { breakpoints_ = std::move(b); }

  // x(t) for t in [t0 - tau, t_end]; the history below t0.
  Vector value(double t) const;

  // sup over s in [t - tau, t] of |x(s)|_inf, taken over grid nodes and the
  // history sampled on the same spacing.
  double segment_sup(double t) const;

 private:
  double t0_;
  double step_;
  double tau_;
  History history_;
  std::vector<Vector> states_;
  std::vector<Vector> derivatives_;
  std::vector<double> breakpoints_;
};

struct IntegrateOptions {
  double t_end = 10.0;
  double step = 0.01;
  std::optional<Forcing> forcing;
};

// Classical RK4 with method-of-steps dense output for
//   x'(t) = alpha-part(x_t) + B F(C x_t) + W(t).
// The step is snapped down so it divides the smallest positive discrete lag.
// Throws NonFiniteState when the solution blows up.
Trace integrate(const DelaySystem& sys, const Nonlinearity& f, const History& history,
                const IntegrateOptions& options);

// Step actually used for a requested step: largest h' <= h dividing the
// smallest positive discrete lag.
double snap_step(const DelaySystem& sys, double step);

// Smooth history with components c_i + a_i sin(w_i t + phi_i), where c_i is
// uniform on [lo, hi], 0 <= a_i <= c_i / 2 and w_i in [0.5, 3]. Components
// stay in [lo / 2, 3 hi / 2]; nonnegative whenever lo >= 0. Deterministic in
// `seed`.
History random_history(Index n, std::uint64_t seed, double lo = 0.1, double hi = 2.0);

struct DecayFit {
  double rate = 0.0;  // -slope of log sup-distance
  double t_a = 0.0;
  double t_b = 0.0;
  double residual = 0.0;  // RMS of the log-linear fit
  std::size_t points = 0;
};

// Trailing-segment sup-distance between two traces on a shared grid:
// sup over s in [t - tau, t] of |x_A(s) - x_B(s)|_inf.
double segment_distance(const Trace& a, const Trace& b, double t);

// Least-squares decay rate of the segment distance over [t_a, t_b]. Throws
// DifferenceUnderflow when the pair has already merged (< 1e-13) at t_a.
DecayFit fit_decay_rate(const Trace& a, const Trace& b, double t_a, double t_b);

}  // namespace delaycert
