#include "delaycert/quadrature.hpp"

#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace delaycert::quadrature {

namespace {

GaussRule build_rule(int order) {
  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    // Tricomi initial guess, then Newton on P_order.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
  if (order < 1 || order > 128) throw std::invalid_argument("gauss_legendre: order out of range");
  static std::mutex mutex;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, build_rule(order)).first;
  return it->second;
}

}  // namespace delaycert::quadrature
