#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace larckit {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr double kDefaultTol = 1e-10;

// Dense-only regime; operations reject anything larger.
inline constexpr int kMaxDenseDim = 256;

// Numerical failure: ill-conditioning, exhausted budgets, failed internal
// re-verification. Distinct from precondition violations, which throw
// std::invalid_argument.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace larckit
