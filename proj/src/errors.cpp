#include "mulab/errors.hpp"

namespace mulab {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::UnboundedRegion: return "UnboundedRegion";
    case ErrorKind::EmptyRegion: return "EmptyRegion";
    case ErrorKind::NonPrimitiveNormal: return "NonPrimitiveNormal";
    case ErrorKind::NonFiniteInput: return "NonFiniteInput";
    case ErrorKind::OverflowRisk: return "OverflowRisk";
    case ErrorKind::NormZero: return "NormZero";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::PositiveLambda: return "PositiveLambda";
    case ErrorKind::NonConvexPotential: return "NonConvexPotential";
    case ErrorKind::NonFiniteMomentum: return "NonFiniteMomentum";
    case ErrorKind::WrongNormalization: return "WrongNormalization";
    case ErrorKind::ConvexityLoss: return "ConvexityLoss";
    case ErrorKind::SchemaError: return "SchemaError";
  }
  return "Unknown";
}

bool is_input_error(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput:
    case ErrorKind::UnboundedRegion:
    case ErrorKind::EmptyRegion:
    case ErrorKind::NonPrimitiveNormal:
    case ErrorKind::SchemaError:
    case ErrorKind::WrongNormalization:
    case ErrorKind::PositiveLambda:
    case ErrorKind::NonConvexPotential:
      return true;
    default:
      return false;
  }
}

}  // namespace mulab
