#pragma once

#include <algorithm>
#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace peakmodel {

using cplx = std::complex<double>;
using VecC = Eigen::VectorXcd;
using VecR = Eigen::VectorXd;
using MatC = Eigen::MatrixXcd;
using Index = Eigen::Index;

enum class ErrorCode {
  EmptySpectrum,
  NonFiniteEigenvalue,
  InvalidOrder,
  DimensionMismatch,
  SpectralCollision,
  RegularPointCollision,
  DuplicateRegularPoint,
  IllConditionedRegularSet,
  IndexOutOfRange,
  DependentFunctionals,
  InsufficientDimension,
  DependentDeficiencyVectors,
  InvalidScaling,
  NonHermitianRenormalization,
  OrderTooSmall,
  DeltaHatCollision,
  InvalidRelation,
  NotInResolventSet,
  NotInSigmaIota,
  NotPositive,
  NonHermitianGZ,
};

// Stable upper-case identifier, used in machine-readable error output.
std::string_view code_name(ErrorCode c);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

// ‖a − b‖ / max(‖a‖, ‖b‖, floor).  Used for every residual in the library.
template <class A, class B>
double rel_diff(const A& a, const B& b, double floor = 1e-300) {
  const double s = std::max({a.norm(), b.norm(), floor});
  return (a - b).norm() / s;
}

inline double rel_diff(cplx a, cplx b, double floor = 1e-300) {
  const double s = std::max({std::abs(a), std::abs(b), floor});
  return std::abs(a - b) / s;
}

}  // namespace peakmodel
