#pragma once

#include <complex>

#include <Eigen/Dense>

namespace delaycert {

using Complex = std::complex<double>;
using Index = Eigen::Index;

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

}  // namespace delaycert
