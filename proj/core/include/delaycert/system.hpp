#pragma once

#include "delaycert/measure.hpp"
#include "delaycert/types.hpp"

namespace delaycert {

// Linear delay plant
//   x'(t) = int_{-tau}^0 da(theta) x(t+theta) + B xi(t),
//   sigma(t) = int_{-tau}^0 dc(theta) x(t+theta),
// with state dimension n, input dimension m and output dimension r.
// All stored data is real; complexification happens at evaluation time.
class DelaySystem {
 public:
  DelaySystem(double tau, DelayMeasure a, Matrix b, DelayMeasure c);

  Index n() const { return b_.rows(); }
  Index m() const { return b_.cols(); }
  Index r() const { return c_.rows(); }
  double tau() const { return tau_; }

  const DelayMeasure& a() const { return a_; }
  const Matrix& b() const { return b_; }
  const DelayMeasure& c() const { return c_; }

 private:
  double tau_;
  DelayMeasure a_;
  Matrix b_;
  DelayMeasure c_;
};

}  // namespace delaycert
