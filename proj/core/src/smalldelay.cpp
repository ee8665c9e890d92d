#include "delaycert/smalldelay.hpp"

#include <cmath>
#include <numbers>

#include "delaycert/error.hpp"

namespace delaycert {

namespace {

Verdict strict(double tau, double threshold) {
  return tau < threshold ? Verdict::Certified : Verdict::Rejected;
}

}  // namespace

SmallDelayReport small_delay_certificate(int n, int r, double lambda, double tau) {
  if (n < 1 || r < 1) throw ConfigError("n and r must be >= 1");
  if (!(lambda > 0.0) || !(tau > 0.0)) throw ConfigError("lambda and tau must be > 0");
  constexpr double e = std::numbers::e;
  const double sr = std::sqrt(static_cast<double>(r));
  SmallDelayReport rep;
  rep.n = n;
  rep.r = r;
  rep.lambda = lambda;
  rep.tau = tau;
  rep.threshold_frequency = 1.0 / (lambda * e * sr * std::sqrt(1.0 + 1.0 / (e * e * r)));
  rep.threshold_ryabov_driver = 1.0 / (lambda * sr * e);
  rep.threshold_chicone = 1.0 / (lambda * 2.0 * sr * std::sqrt(e));
  rep.verdict_frequency = strict(tau, rep.threshold_frequency);
  rep.verdict_ryabov_driver = strict(tau, rep.threshold_ryabov_driver);
  rep.verdict_chicone = strict(tau, rep.threshold_chicone);
  if (rep.verdict_frequency == Verdict::Certified) {
    rep.nu = 1.0 / tau;
    rep.dimension = n;
  }
  return rep;
}

double small_delay_spectral_bound(int r, double nu, double a_shift, double tau) {
  if (!(a_shift + nu > 0.0)) throw ConfigError("small_delay_spectral_bound needs a + nu > 0");
  return std::sqrt(r * std::exp(2.0 * tau * nu) + 1.0) / (a_shift + nu);
}

DelaySystem build_small_delay_plant(int n, const std::vector<DelayedReadout>& readouts,
                                    double a_shift, double tau) {
  if (n < 1) throw ConfigError("n must be >= 1");
  const Index r = static_cast<Index>(readouts.size());
  std::vector<Atom> c_atoms;
  for (Index k = 0; k < r; ++k) {
    const auto& ro = readouts[k];
    if (ro.state < 0 || ro.state >= n) throw ConfigError("readout state index out of range");
    if (ro.lag < 0.0 || ro.lag > tau) throw ConfigError("readout lag must lie in [0, tau]");
    Matrix row = Matrix::Zero(r + n, n);
    row(k, ro.state) = 1.0;
    c_atoms.push_back({-ro.lag, row});
  }
  Matrix current = Matrix::Zero(r + n, n);
  current.bottomRows(n).setIdentity();
  c_atoms.push_back({0.0, current});
  DelayMeasure a = DelayMeasure::point(0.0, a_shift * Matrix::Identity(n, n));
  DelayMeasure c(r + n, n, std::move(c_atoms));
  return DelaySystem(tau, std::move(a), Matrix::Identity(n, n), std::move(c));
}

}  // namespace delaycert
