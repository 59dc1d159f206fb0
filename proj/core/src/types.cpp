#include "peakmodel/types.hpp"

namespace peakmodel {

std::string_view code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::EmptySpectrum: return "EMPTY_SPECTRUM";
    case ErrorCode::NonFiniteEigenvalue: return "NON_FINITE_EIGENVALUE";
    case ErrorCode::InvalidOrder: return "INVALID_ORDER";
    case ErrorCode::DimensionMismatch: return "DIMENSION_MISMATCH";
    case ErrorCode::SpectralCollision: return "SPECTRAL_COLLISION";
    case ErrorCode::RegularPointCollision: return "REGULAR_POINT_COLLISION";
    case ErrorCode::DuplicateRegularPoint: return "DUPLICATE_REGULAR_POINT";
    case ErrorCode::IllConditionedRegularSet: return "ILL_CONDITIONED_REGULAR_SET";
    case ErrorCode::IndexOutOfRange: return "INDEX_OUT_OF_RANGE";
    case ErrorCode::DependentFunctionals: return "DEPENDENT_FUNCTIONALS";
    case ErrorCode::InsufficientDimension: return "INSUFFICIENT_DIMENSION";
    case ErrorCode::DependentDeficiencyVectors: return "DEPENDENT_DEFICIENCY_VECTORS";
    case ErrorCode::InvalidScaling: return "INVALID_SCALING";
    case ErrorCode::NonHermitianRenormalization: return "NON_HERMITIAN_RENORMALIZATION";
    case ErrorCode::OrderTooSmall: return "ORDER_TOO_SMALL";
    case ErrorCode::DeltaHatCollision: return "DELTA_HAT_COLLISION";
    case ErrorCode::InvalidRelation: return "INVALID_RELATION";
    case ErrorCode::NotInResolventSet: return "NOT_IN_RESOLVENT_SET";
    case ErrorCode::NotInSigmaIota: return "NOT_IN_SIGMA_IOTA";
    case ErrorCode::NotPositive: return "NOT_POSITIVE";
    case ErrorCode::NonHermitianGZ: return "NON_HERMITIAN_GZ";
  }
  return "UNKNOWN";
}

}  // namespace peakmodel
