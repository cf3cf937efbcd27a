#include "qcext/error.hpp"

namespace qcext {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::MalformedSyntax: return "malformed-syntax";
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::DimensionMismatch: return "dimension-mismatch";
    case ErrorKind::SingularPoint: return "singular-point";
    case ErrorKind::ResolutionTooSmall: return "resolution-too-small";
    case ErrorKind::DimensionOverflow: return "dimension-overflow";
    case ErrorKind::NonFiniteIntegrand: return "non-finite-integrand";
    case ErrorKind::NonFiniteEvaluation: return "non-finite-evaluation";
    case ErrorKind::NoConvergence: return "no-convergence";
    case ErrorKind::ZeroMatrix: return "zero-matrix";
    case ErrorKind::OutOfRange: return "out-of-range";
    case ErrorKind::DegenerateMap: return "degenerate-map";
    case ErrorKind::DegenerateTriple: return "degenerate-triple";
    case ErrorKind::NonpositiveDeterminant: return "nonpositive-determinant";
    case ErrorKind::ZeroMass: return "zero-mass";
    case ErrorKind::DegenerateImage: return "degenerate-image";
    case ErrorKind::NonpositiveHeight: return "nonpositive-height";
    case ErrorKind::VanishingVertical: return "vanishing-vertical";
  }
  return "unknown";
}

}  // namespace qcext
