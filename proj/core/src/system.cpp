#include "delaycert/system.hpp"

#include <cmath>
#include <string>

#include "delaycert/error.hpp"

namespace delaycert {

namespace {

void check_support(const DelayMeasure& mu, double tau, const char* name) {
  // Tiny slack for horizons computed as sums/products of user data.
  const double slack = 1e-12 * std::max(1.0, tau);
  if (mu.support_extent() > tau + slack)
    throw ConfigError(std::string("measure ") + name + " has support outside [-tau, 0]");
}

}  // namespace

DelaySystem::DelaySystem(double tau, DelayMeasure a, Matrix b, DelayMeasure c)
    : tau_(tau), a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {
  if (!(tau_ > 0.0) || !std::isfinite(tau_)) throw ConfigError("tau must be positive and finite");
  const Index n = b_.rows();
  if (n <= 0 || b_.cols() <= 0) throw DimensionError("B must have positive dimensions");
  if (a_.rows() != n || a_.cols() != n)
    throw DimensionError("measure a must be " + std::to_string(n) + "x" + std::to_string(n));
  if (c_.cols() != n) throw DimensionError("measure c must have " + std::to_string(n) + " columns");
  if (!b_.allFinite()) throw ConfigError("B contains non-finite entries");
  check_support(a_, tau_, "a");
  check_support(c_, tau_, "c");
}

}  // namespace delaycert
