#pragma once

#include <cmath>
#include <complex>
#include <random>

#include "delaycert/system.hpp"

namespace testing {

using delaycert::Complex;
using delaycert::DelayMeasure;
using delaycert::DelaySystem;
using delaycert::Matrix;

inline Matrix scalar(double v) { return Matrix::Constant(1, 1, v); }

// x'(t) = sum_k a_k x(t - lag_k) + xi, sigma = x(t).
inline DelaySystem scalar_plant(std::initializer_list<std::pair<double, double>> lag_gain,
                                double tau) {
  std::vector<delaycert::Atom> atoms;
  for (auto [lag, gain] : lag_gain) atoms.push_back({-lag, scalar(gain)});
  return DelaySystem(tau, DelayMeasure(1, 1, atoms), scalar(1.0), DelayMeasure::point(0.0, scalar(1.0)));
}

// Goodwin transfer -1 / ((lambda + p)^3 e^{tau p} + rho).
inline Complex goodwin_w(double tau, double lambda, double rho, Complex p) {
  return -1.0 / (std::pow(lambda + p, 3) * std::exp(tau * p) + rho);
}

inline double rel_err(Complex a, Complex b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

}  // namespace testing
