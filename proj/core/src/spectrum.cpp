#include "delaycert/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "delaycert/error.hpp"
#include "delaycert/quadrature.hpp"
#include "delaycert/transfer.hpp"

namespace delaycert {

namespace {

struct CharValue {
  Complex delta;
  Complex log_derivative;
};

CharValue char_value(const DelaySystem& sys, Complex p) {
  const ComplexMatrix k = characteristic_matrix(sys, p);
  ComplexMatrix dk = eval_measure_derivative(sys.a(), p);
  dk.diagonal().array() -= 1.0;
  const Eigen::PartialPivLU<ComplexMatrix> lu(k);
  const Complex det = lu.determinant();
  if (det == Complex(0.0)) return {det, Complex(std::numeric_limits<double>::infinity())};
  return {det, lu.solve(dk).trace()};
}

double wrap_pi(double x) { return std::remainder(x, 2.0 * std::numbers::pi); }

// Adaptive Kronrod integration of Delta'/Delta along the segment z0 -> z1.
// A panel is accepted only when the Kronrod error is small and the result
// agrees with the change of log Delta between the panel ends, which catches
// spikes from roots near the segment that the 15 nodes might step over.
struct EdgeResult {
  Complex integral;
  int panels;
};

EdgeResult integrate_edge(const DelaySystem& sys, Complex z0, Complex z1, double tol,
                          int initial_panels) {
  const Complex dz = z1 - z0;
  auto integrand = [&](double t) { return char_value(sys, z0 + t * dz).log_derivative * dz; };
  auto log_delta = [&](double t) { return std::log(char_value(sys, z0 + t * dz).delta); };

  struct Panel {
    double a, b;
    Complex log_a, log_b;
    int depth;
  };
  std::vector<Panel> stack;
  {
    std::vector<Complex> logs(initial_panels + 1);
    for (int i = 0; i <= initial_panels; ++i) logs[i] = log_delta(static_cast<double>(i) / initial_panels);
    for (int i = initial_panels - 1; i >= 0; --i)
      stack.push_back({static_cast<double>(i) / initial_panels,
                       static_cast<double>(i + 1) / initial_panels, logs[i], logs[i + 1], 0});
  }
  Complex sum = 0.0;
  int accepted = 0;
  const auto norm = [](Complex c) { return std::abs(c); };
  while (!stack.empty()) {
    const Panel p = stack.back();
    stack.pop_back();
    const auto r = quadrature::kronrod15(integrand, p.a, p.b, norm);
    const Complex jump = p.log_b - p.log_a;
    const double phase_gap = std::abs(wrap_pi(r.value.imag() - jump.imag()));
    const double modulus_gap = std::abs(r.value.real() - jump.real());
    const bool consistent = phase_gap < 1e-3 && modulus_gap < 1e-3 * (1.0 + std::abs(jump.real()));
    const bool precise = r.error <= tol * (p.b - p.a) && std::isfinite(r.error);
    if ((consistent && precise) || p.depth >= 60) {
      sum += r.value;
      ++accepted;
      continue;
    }
    const double mid = 0.5 * (p.a + p.b);
    const Complex log_mid = log_delta(mid);
    stack.push_back({mid, p.b, log_mid, p.log_b, p.depth + 1});
    stack.push_back({p.a, mid, p.log_a, log_mid, p.depth + 1});
  }
  return {sum, accepted};
}

}  // namespace

Complex char_fn(const DelaySystem& sys, Complex p) {
  return characteristic_matrix(sys, p).partialPivLu().determinant();
}

Complex char_fn_log_derivative(const DelaySystem& sys, Complex p) {
  return char_value(sys, p).log_derivative;
}

// If Delta(p) = 0 there is x != 0 with alpha(p) x = p x, so
//   |p| <= |alpha(p)|_2 <= sup_{theta in [-tau,0]} |exp(p theta)| * TV(a).
// For Re p >= -nu and theta in [-tau, 0], |exp(p theta)| = exp(Re(p) theta)
// <= max(1, exp(nu tau)). The extra 1 keeps the contour away from the roots.
double root_box(const DelaySystem& sys, double nu) {
  if (!(nu >= 0.0)) throw ConfigError("root_box requires nu >= 0");
  const double growth = std::max(1.0, std::exp(nu * sys.tau()));
  return growth * total_variation(sys.a()) + 1.0;
}

RootCount count_roots_right_of(const DelaySystem& sys, double nu, const RootCountOptions& options) {
  const double radius = root_box(sys, nu);
  RootCount result;
  result.nu = nu;
  result.contour = {Complex(-nu, -radius), Complex(radius, radius)};

  // Root-on-line screening along Re p = -nu.
  const int samples = std::max(options.edge_samples, 16);
  std::vector<double> ys(samples);
  std::vector<double> mods(samples);
  double max_mod = 0.0;
  for (int i = 0; i < samples; ++i) {
    ys[i] = -radius + 2.0 * radius * i / (samples - 1);
    mods[i] = std::abs(char_fn(sys, Complex(-nu, ys[i])));
    max_mod = std::max(max_mod, mods[i]);
  }
  std::vector<int> minima;
  for (int i = 0; i < samples; ++i) {
    const bool left_ok = i == 0 || mods[i] <= mods[i - 1];
    const bool right_ok = i == samples - 1 || mods[i] <= mods[i + 1];
    if (left_ok && right_ok) minima.push_back(i);
  }
  std::sort(minima.begin(), minima.end(), [&](int a, int b) { return mods[a] < mods[b]; });
  if (minima.size() > 8) minima.resize(8);
  double min_mod = *std::min_element(mods.begin(), mods.end());
  double min_y = 0.0;
  for (int i : minima) {
    // Golden-section search of |Delta(-nu + iy)| on the bracketing cell.
    double lo = ys[std::max(i - 1, 0)];
    double hi = ys[std::min(i + 1, samples - 1)];
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    auto f = [&](double y) { return std::abs(char_fn(sys, Complex(-nu, y))); };
    double x1 = hi - g * (hi - lo);
    double x2 = lo + g * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(lo)); ++it) {
      if (f1 < f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - g * (hi - lo);
        f1 = f(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + g * (hi - lo);
        f2 = f(x2);
      }
    }
    const double local = std::min({f1, f2, mods[i]});
    if (local < min_mod) {
      min_mod = local;
      min_y = f1 < f2 ? x1 : x2;
    } else if (local == mods[i] && local <= min_mod) {
      min_y = ys[i];
    }
  }
  result.min_boundary_modulus = min_mod;
  if (min_mod < options.line_threshold * (1.0 + max_mod)) {
    std::ostringstream os;
    os << "characteristic root on the line Re p = " << -nu << " near Im p = " << min_y
       << " (|Delta| = " << min_mod << "); perturb nu";
    throw RootOnLine(os.str(), min_y);
  }

  const std::array<Complex, 5> corners = {Complex(-nu, -radius), Complex(radius, -radius),
                                          Complex(radius, radius), Complex(-nu, radius),
                                          Complex(-nu, -radius)};
  double tol = options.initial_tolerance;
  double residual = 1.0;
  long winding = 0;
  for (int round = 0; round <= options.max_refinements; ++round) {
    Complex total = 0.0;
    int panels = 0;
    for (int e = 0; e < 4; ++e) {
      const auto edge = integrate_edge(sys, corners[e], corners[e + 1], tol, 32);
      total += edge.integral;
      panels += edge.panels;
    }
    const Complex raw = total / Complex(0.0, 2.0 * std::numbers::pi);
    winding = std::lround(raw.real());
    residual = std::abs(raw - static_cast<double>(winding));
    result.panels = panels;
    if (residual < options.target_residual) break;
    tol *= 1e-2;
  }
  result.winding_residual = residual;
  if (residual >= options.reject_residual || winding < 0) {
    std::ostringstream os;
    os << "contour winding did not settle (residual " << residual << ")";
    throw NonIntegerWinding(os.str(), residual);
  }
  result.count = static_cast<int>(winding);
  return result;
}

Complex newton_root(const DelaySystem& sys, Complex guess, double tol, int max_iter) {
  Complex p = guess;
  for (int it = 0; it < max_iter; ++it) {
    const Complex step = 1.0 / char_fn_log_derivative(sys, p);
    p -= step;
    if (std::abs(step) <= tol * std::max(1.0, std::abs(p))) return p;
  }
  return p;
}

}  // namespace delaycert
