#include "delaycert/transfer.hpp"

#include <cmath>
#include <sstream>

#include "delaycert/error.hpp"

namespace delaycert {

namespace {

// Largest safe argument for exp in double precision.
constexpr double kMaxExponent = 700.0;

Complex checked_exp(Complex z) {
  if (z.real() > kMaxExponent) {
    std::ostringstream os;
    os << "exp(p*theta) overflows: Re(p*theta) = " << z.real();
    throw OverflowError(os.str());
  }
  return std::exp(z);
}

// S_i = int_{-h}^{h} exp(p s) s^i ds, i = 0..max_power.
std::vector<Complex> centered_moments(double h, Complex p, int max_power) {
  std::vector<Complex> s(max_power + 1);
  const double ph = std::abs(p) * h;
  if (ph <= 2.0) {
    // exp(p s) = sum_j (p s)^j / j!; odd powers integrate to zero.
    for (int i = 0; i <= max_power; ++i) {
      Complex sum = 0.0;
      Complex coeff = 1.0;  // p^j / j!
      for (int j = 0; j < 200; ++j) {
        if (j > 0) coeff *= p / static_cast<double>(j);
        const int q = i + j;
        if (q % 2 == 1) continue;
        const Complex term = coeff * (2.0 * std::pow(h, q + 1) / (q + 1));
        sum += term;
        if (j > 2 && std::abs(term) <= 1e-17 * std::abs(sum)) break;
      }
      s[i] = sum;
    }
    return s;
  }
  const Complex ep = checked_exp(p * h);
  const Complex em = checked_exp(-p * h);
  s[0] = (ep - em) / p;
  double hi = 1.0;   // h^i
  double mhi = 1.0;  // (-h)^i
  for (int i = 1; i <= max_power; ++i) {
    hi *= h;
    mhi *= -h;
    s[i] = (ep * hi - em * mhi) / p - (static_cast<double>(i) / p) * s[i - 1];
  }
  return s;
}

}  // namespace

std::vector<Complex> exp_moments(double lower, double upper, Complex p, int max_power) {
  const double mid = 0.5 * (lower + upper);
  const double h = 0.5 * (upper - lower);
  const double worst = std::max(p.real() * lower, p.real() * upper);
  if (worst > kMaxExponent) {
    std::ostringstream os;
    os << "exp(p*theta) overflows on [" << lower << ", " << upper << "] at p = " << p;
    throw OverflowError(os.str());
  }
  const std::vector<Complex> s = centered_moments(h, p, max_power);
  const Complex scale = std::exp(p * mid);
  // theta^k = sum_i C(k,i) mid^(k-i) s^i.
  std::vector<Complex> out(max_power + 1);
  for (int k = 0; k <= max_power; ++k) {
    Complex acc = 0.0;
    double binom = 1.0;
    for (int i = 0; i <= k; ++i) {
      acc += binom * std::pow(mid, k - i) * s[i];
      binom = binom * (k - i) / (i + 1);
    }
    out[k] = scale * acc;
  }
  return out;
}

namespace {

template <class Mat>
void accumulate_measure(const DelayMeasure& mu, Complex p, int theta_power, Mat& out) {
  for (const auto& atom : mu.atoms()) {
    Complex w = checked_exp(p * atom.theta);
    if (theta_power == 1) w *= atom.theta;
    out.real() += w.real() * atom.weight;
    out.imag() += w.imag() * atom.weight;
  }
  for (const auto& piece : mu.pieces()) {
    const int deg = piece.degree();
    const auto moments = exp_moments(piece.lower, piece.upper, p, deg + theta_power);
    for (int k = 0; k <= deg; ++k) {
      const Complex w = moments[k + theta_power];
      out.real() += w.real() * piece.coeffs[k];
      out.imag() += w.imag() * piece.coeffs[k];
    }
  }
}

template <class Mat>
ComplexMatrix transfer_impl(const DelaySystem& sys, Complex p) {
  const Index n = sys.n();
  Mat k = Mat::Zero(n, n);
  accumulate_measure(sys.a(), p, 0, k);
  k.diagonal().array() -= p;
  const Eigen::PartialPivLU<Mat> lu(k);
  const double rcond = lu.rcond();
  if (!(rcond >= kSingularRcond)) {
    std::ostringstream os;
    os << "alpha(p) - pI is singular at p = " << p << " (rcond " << rcond << ")";
    throw SingularAtP(os.str(), rcond);
  }
  const Mat x = lu.solve(Mat(sys.b().cast<Complex>()));
  Mat gamma = Mat::Zero(sys.r(), n);
  accumulate_measure(sys.c(), p, 0, gamma);
  ComplexMatrix w = gamma * x;
  if (!w.allFinite()) {
    std::ostringstream os;
    os << "transfer matrix is not finite at p = " << p;
    throw OverflowError(os.str());
  }
  return w;
}

// Stack storage for small plants avoids heap traffic in frequency sweeps.
constexpr Index kSmall = 4;
using SmallComplexMatrix =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kSmall, kSmall>;

}  // namespace

ComplexMatrix eval_measure(const DelayMeasure& mu, Complex p) {
  ComplexMatrix out = ComplexMatrix::Zero(mu.rows(), mu.cols());
  accumulate_measure(mu, p, 0, out);
  return out;
}

ComplexMatrix eval_measure_derivative(const DelayMeasure& mu, Complex p) {
  ComplexMatrix out = ComplexMatrix::Zero(mu.rows(), mu.cols());
  accumulate_measure(mu, p, 1, out);
  return out;
}

ComplexMatrix characteristic_matrix(const DelaySystem& sys, Complex p) {
  ComplexMatrix m = eval_measure(sys.a(), p);
  m.diagonal().array() -= p;
  return m;
}

ComplexMatrix eval_transfer(const DelaySystem& sys, Complex p) {
  if (sys.n() <= kSmall && sys.m() <= kSmall && sys.r() <= kSmall)
    return transfer_impl<SmallComplexMatrix>(sys, p);
  return transfer_impl<ComplexMatrix>(sys, p);
}

double spectral_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() == 1 || m.cols() == 1) return m.norm();
  const Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

}  // namespace delaycert
