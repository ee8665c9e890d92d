#include "delaycert/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "delaycert/error.hpp"
#include "delaycert/quadrature.hpp"

namespace delaycert {

namespace {

Vector hermite(const Vector& x0, const Vector& f0, const Vector& x1, const Vector& f1, double h,
               double s) {
  const double om = 1.0 - s;
  const double h00 = (1.0 + 2.0 * s) * om * om;
  const double h10 = s * om * om;
  const double h01 = s * s * (3.0 - 2.0 * s);
  const double h11 = s * s * (s - 1.0);
  return h00 * x0 + (h10 * h) * f0 + h01 * x1 + (h11 * h) * f1;
}

std::vector<double> discrete_lags(const DelaySystem& sys) {
  std::set<double> lags;
  for (const auto* mu : {&sys.a(), &sys.c()})
    for (const auto& atom : mu->atoms())
      if (atom.theta < 0.0) lags.insert(-atom.theta);
  return {lags.begin(), lags.end()};
}

// Solution state while the integrator runs. Nodes 0..n are known; the
// derivative at node n may still be pending (while computing k1).
class Solution {
 public:
  Solution(double t0, double h, const History& history) : t0_(t0), h_(h), history_(history) {}

  std::vector<Vector> states;
  std::vector<Vector> derivs;

  Vector at(double t) const {
    const double u = (t - t0_) / h_;
    if (u < 0.0) return history_(t);
    const std::size_t last = states.size() - 1;
    const bool last_has_deriv = derivs.size() == states.size();
    const std::size_t complete = last_has_deriv ? last : (last == 0 ? 0 : last - 1);
    if (u <= static_cast<double>(complete) + 1e-9) {
      if (complete == 0) return states[0];
      std::size_t k = std::min(static_cast<std::size_t>(std::floor(u)), complete - 1);
      return hermite(states[k], derivs[k], states[k + 1], derivs[k + 1], h_, u - k);
    }
    if (last == 0) return last_has_deriv ? Vector(states[0] + (t - t0_) * derivs[0]) : states[0];
    if (!last_has_deriv) {
      // (t_{n-1}, t_n]: quadratic through x_{n-1}, f_{n-1} and x_n.
      const std::size_t k = last - 1;
      const double s = u - static_cast<double>(k);
      return states[k] + (s * h_) * derivs[k] + (s * s) * (states[last] - states[k] - h_ * derivs[k]);
    }
    // Beyond the last node: extrapolate the last Hermite segment.
    return hermite(states[last - 1], derivs[last - 1], states[last], derivs[last], h_,
                   u - static_cast<double>(last - 1));
  }

  double grid_point(long k) const { return t0_ + h_ * static_cast<double>(k); }
  double t0() const { return t0_; }
  double h() const { return h_; }

 private:
  double t0_;
  double h_;
  const History& history_;
};

// int dmu(theta) x(t + theta), with x(t) itself replaced by `current`.
Vector apply_measure(const DelayMeasure& mu, double t, const Vector& current, const Solution& sol) {
  Vector out = Vector::Zero(mu.rows());
  for (const auto& atom : mu.atoms()) {
    if (atom.theta == 0.0)
      out.noalias() += atom.weight * current;
    else
      out.noalias() += atom.weight * sol.at(t + atom.theta);
  }
  for (const auto& piece : mu.pieces()) {
    const auto& rule = quadrature::gauss_legendre(piece.degree() + 4);
    const double lo = t + piece.lower;
    const double hi = t + piece.upper;
    // Sub-intervals split on the grid so each sees one smooth segment.
    const long k_first = static_cast<long>(std::floor((lo - sol.t0()) / sol.h())) + 1;
    double a = lo;
    for (long k = k_first;; ++k) {
      const double b = std::min(sol.grid_point(k), hi);
      if (b > a) {
        const double c = 0.5 * (a + b);
        const double w = 0.5 * (b - a);
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
          const double s = c + w * rule.nodes[q];
          out.noalias() += (rule.weights[q] * w) * (piece.at(s - t) * sol.at(s));
        }
      }
      a = std::max(a, b);
      if (b >= hi) break;
    }
  }
  return out;
}

struct Rhs {
  const DelaySystem& sys;
  const Nonlinearity& f;
  const std::optional<Forcing>& forcing;

  Vector operator()(double t, const Vector& x, const Solution& sol) const {
    Vector dx = apply_measure(sys.a(), t, x, sol);
    const Vector sigma = apply_measure(sys.c(), t, x, sol);
    try {
      dx.noalias() += sys.b() * f(sigma);
    } catch (const EvaluationError& e) {
      std::ostringstream os;
      os << "nonlinearity failed at t = " << t << ": " << e.what();
      throw NonFiniteState(os.str(), t);
    }
    if (forcing) dx += (*forcing)(t);
    return dx;
  }
};

void check_finite(const Vector& x, double t) {
  if (!x.allFinite()) {
    std::ostringstream os;
    os << "solution is not finite at t = " << t;
    throw NonFiniteState(os.str(), t);
  }
}

}  // namespace

Trace::Trace(double t0, double step, double tau, History history, std::vector<Vector> states,
             std::vector<Vector> derivatives)
    : t0_(t0),
      step_(step),
      tau_(tau),
      history_(std::move(history)),
      states_(std::move(states)),
      derivatives_(std::move(derivatives)) {
  if (states_.empty() || states_.size() != derivatives_.size())
    throw ConfigError("trace needs matching, non-empty state and derivative arrays");
}

Vector Trace::value(double t) const {
  const double u = (t - t0_) / step_;
  if (u < 0.0) {
    if (t < t0_ - tau_ * (1.0 + 1e-12) - 1e-12) throw ConfigError("trace query before t0 - tau");
    return history_(t);
  }
  const std::size_t last = states_.size() - 1;
  if (u > static_cast<double>(last) + 1e-9) throw ConfigError("trace query after t_end");
  if (last == 0) return states_[0];
  const std::size_t k = std::min(static_cast<std::size_t>(std::floor(u)), last - 1);
  const double s = u - static_cast<double>(k);
  if (s == 0.0) return states_[k];
  if (s == 1.0) return states_[k + 1];
  return hermite(states_[k], derivatives_[k], states_[k + 1], derivatives_[k + 1], step_, s);
}

double Trace::segment_sup(double t) const {
  double sup = 0.0;
  const long count = static_cast<long>(std::ceil(tau_ / step_ - 1e-9));
  for (long j = 0; j <= count; ++j) {
    const double s = std::max(t - step_ * static_cast<double>(j), t - tau_);
    sup = std::max(sup, value(s).lpNorm<Eigen::Infinity>());
  }
  return sup;
}

double snap_step(const DelaySystem& sys, double step) {
  if (!(step > 0.0)) throw ConfigError("step must be positive");
  const auto lags = discrete_lags(sys);
  if (lags.empty()) return step;
  const double smallest = lags.front();
  const double k = std::ceil(smallest / step - 1e-12);
  return smallest / std::max(1.0, k);
}

Trace integrate(const DelaySystem& sys, const Nonlinearity& f, const History& history,
                const IntegrateOptions& options) {
  if (!(options.t_end > 0.0)) throw ConfigError("t_end must be positive");
  if (f.input_dim() != sys.r() || f.output_dim() != sys.m())
    throw DimensionError("nonlinearity dimensions do not match the plant (r, m)");
  const double h = snap_step(sys, options.step);
  const auto steps = static_cast<std::size_t>(std::ceil(options.t_end / h - 1e-9));

  Solution sol(0.0, h, history);
  Vector x0 = history(0.0);
  if (x0.size() != sys.n()) throw DimensionError("history has the wrong dimension");
  check_finite(x0, 0.0);
  sol.states.reserve(steps + 1);
  sol.derivs.reserve(steps + 1);
  sol.states.push_back(x0);

  const Rhs rhs{sys, f, options.forcing};
  for (std::size_t n = 0;; ++n) {
    const double t = h * static_cast<double>(n);
    const Vector& x = sol.states[n];
    const Vector k1 = rhs(t, x, sol);
    check_finite(k1, t);
    sol.derivs.push_back(k1);
    if (n == steps) break;
    const Vector k2 = rhs(t + 0.5 * h, x + (0.5 * h) * k1, sol);
    const Vector k3 = rhs(t + 0.5 * h, x + (0.5 * h) * k2, sol);
    const Vector k4 = rhs(t + h, x + h * k3, sol);
    Vector next = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    check_finite(next, t + h);
    sol.states.push_back(std::move(next));
  }

  Trace trace(0.0, h, sys.tau(), history, std::move(sol.states), std::move(sol.derivs));
  std::set<double> marks;
  for (double lag : discrete_lags(sys)) {
    for (double b = lag; b <= trace.t_end() + 1e-12 && marks.size() < 100000; b += lag)
      marks.insert(b);
  }
  trace.set_breakpoints({marks.begin(), marks.end()});
  return trace;
}

History random_history(Index n, std::uint64_t seed, double lo, double hi) {
  if (n < 1) throw ConfigError("history dimension must be positive");
  if (!(lo <= hi)) throw ConfigError("random history needs lo <= hi");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vector c(n), a(n), w(n), phi(n);
  for (Index i = 0; i < n; ++i) {
    c(i) = lo + (hi - lo) * unit(rng);
    a(i) = 0.5 * c(i) * unit(rng);
    w(i) = 0.5 + 2.5 * unit(rng);
    phi(i) = 2.0 * std::numbers::pi * unit(rng);
  }
  return [c, a, w, phi](double t) {
    Vector x(c.size());
    for (Index i = 0; i < c.size(); ++i) x(i) = c(i) + a(i) * std::sin(w(i) * t + phi(i));
    return x;
  };
}

namespace {

void check_shared_grid(const Trace& a, const Trace& b) {
  if (a.step() != b.step() || a.t0() != b.t0() || a.size() != b.size() || a.dim() != b.dim() ||
      a.tau() != b.tau())
    throw ConfigError("traces do not share a grid");
}

}  // namespace

double segment_distance(const Trace& a, const Trace& b, double t) {
  check_shared_grid(a, b);
  double sup = 0.0;
  const double h = a.step();
  const long count = static_cast<long>(std::ceil(a.tau() / h - 1e-9));
  for (long j = 0; j <= count; ++j) {
    const double s = std::max(t - h * static_cast<double>(j), t - a.tau());
    sup = std::max(sup, (a.value(s) - b.value(s)).lpNorm<Eigen::Infinity>());
  }
  return sup;
}

DecayFit fit_decay_rate(const Trace& a, const Trace& b, double t_a, double t_b) {
  check_shared_grid(a, b);
  if (!(t_a < t_b)) throw ConfigError("fit window needs t_a < t_b");
  const double h = a.step();
  const long lag_nodes = static_cast<long>(std::ceil(a.tau() / h - 1e-9));
  const long n = static_cast<long>(a.size());

  // Pointwise differences on the grid, history included (index shift lag_nodes).
  std::vector<double> diff(static_cast<std::size_t>(n + lag_nodes));
  for (long j = -lag_nodes; j < n; ++j) {
    const double t = j < 0 ? std::max(a.t0() + h * j, a.t0() - a.tau()) : a.time(j);
    const Vector d = j < 0 ? Vector(a.value(t) - b.value(t))
                           : Vector(a.states()[j] - b.states()[j]);
    diff[j + lag_nodes] = d.lpNorm<Eigen::Infinity>();
  }

  // Sliding maximum over the trailing segment.
  std::deque<long> window;
  std::vector<double> ts;
  std::vector<double> logs;
  for (long j = -lag_nodes; j < n; ++j) {
    const long idx = j + lag_nodes;
    while (!window.empty() && diff[window.back()] <= diff[idx]) window.pop_back();
    window.push_back(idx);
    while (window.front() < idx - lag_nodes) window.pop_front();
    if (j < 0) continue;
    const double t = a.time(j);
    if (t < t_a - 1e-12 || t > t_b + 1e-12) continue;
    const double d = diff[window.front()];
    if (d < 1e-13) {
      if (ts.empty()) {
        std::ostringstream os;
        os << "trajectories already merged (distance " << d << ") at t = " << t;
        throw DifferenceUnderflow(os.str(), t);
      }
      break;
    }
    ts.push_back(t);
    logs.push_back(std::log(d));
  }
  if (ts.size() < 2) throw ConfigError("fit window holds fewer than two grid nodes");

  const double m = static_cast<double>(ts.size());
  double st = 0.0, sl = 0.0, stt = 0.0, stl = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    st += ts[i];
    sl += logs[i];
    stt += ts[i] * ts[i];
    stl += ts[i] * logs[i];
  }
  const double slope = (m * stl - st * sl) / (m * stt - st * st);
  const double intercept = (sl - slope * st) / m;
  double ss = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double r = logs[i] - (intercept + slope * ts[i]);
    ss += r * r;
  }
  DecayFit fit;
  fit.rate = -slope;
  fit.t_a = ts.front();
  fit.t_b = ts.back();
  fit.residual = std::sqrt(ss / m);
  fit.points = ts.size();
  return fit;
}

}  // namespace delaycert
