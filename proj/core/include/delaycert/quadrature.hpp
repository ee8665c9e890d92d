#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

namespace delaycert::quadrature {

// Gauss-Legendre rule on [-1, 1]. Exact for polynomials of degree 2*order-1.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Cached rule; thread-safe (function-local statics per order).
const GaussRule& gauss_legendre(int order);

// 7-point Gauss / 15-point Kronrod pair on [-1, 1].
struct KronrodPair {
  static constexpr std::array<double, 8> xk = {
      0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
      0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
      0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
      0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
  static constexpr std::array<double, 8> wk = {
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  static constexpr std::array<double, 4> wg = {
      0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
};

template <class T>
struct KronrodResult {
  T value;
  double error;
};

// One G7K15 panel on [a, b]; `norm` measures the difference |K - G|.
template <class F, class Norm>
auto kronrod15(F&& f, double a, double b, Norm&& norm) {
  using T = decltype(f(a));
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const T fc = f(c);
  T kron = fc * KronrodPair::wk[7];
  T gauss = fc * KronrodPair::wg[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = h * KronrodPair::xk[i];
    const T f1 = f(c - dx);
    const T f2 = f(c + dx);
    kron += (f1 + f2) * KronrodPair::wk[i];
    if (i % 2 == 1) gauss += (f1 + f2) * KronrodPair::wg[i / 2];
  }
  kron *= h;
  gauss *= h;
  return KronrodResult<T>{kron, norm(kron - gauss)};
}

// Adaptive bisection driven by the Kronrod error estimate. Each panel is
// accepted once its error is below its share of `abs_tol` (scaled by
// length), below the roundoff floor of its own value, or the depth limit is
// hit.
template <class F, class Norm>
auto adaptive_kronrod(F&& f, double a, double b, double abs_tol, Norm&& norm, int max_depth = 48) {
  using T = decltype(f(a));
  struct Panel {
    double a, b;
    int depth;
  };
  const double total = b - a;
  T sum{};
  double err = 0.0;
  std::vector<Panel> stack{{a, b, 0}};
  while (!stack.empty()) {
    const Panel p = stack.back();
    stack.pop_back();
    const auto r = kronrod15(f, p.a, p.b, norm);
    const double share = abs_tol * (p.b - p.a) / total;
    const double floor = 64.0 * 2.220446049250313e-16 * norm(r.value);
    if (r.error <= share || r.error <= floor || p.depth >= max_depth ||
        !std::isfinite(r.error)) {
      sum += r.value;
      err += r.error;
      continue;
    }
    const double mid = 0.5 * (p.a + p.b);
    stack.push_back({mid, p.b, p.depth + 1});
    stack.push_back({p.a, mid, p.depth + 1});
  }
  return KronrodResult<T>{sum, err};
}

template <class F>
double adaptive_kronrod(F&& f, double a, double b, double abs_tol) {
  return adaptive_kronrod(std::forward<F>(f), a, b, abs_tol, [](double d) { return std::abs(d); })
      .value;
}

}  // namespace delaycert::quadrature
