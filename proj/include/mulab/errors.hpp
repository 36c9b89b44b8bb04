#pragma once

#include <stdexcept>
#include <string>

namespace mulab {

enum class ErrorKind {
  InvalidInput,
  UnboundedRegion,
  EmptyRegion,
  NonPrimitiveNormal,
  NonFiniteInput,
  OverflowRisk,
  NormZero,
  NonConvergence,
  PositiveLambda,
  NonConvexPotential,
  NonFiniteMomentum,
  WrongNormalization,
  ConvexityLoss,
  SchemaError,
};

const char* to_string(ErrorKind kind);

/// True for kinds that describe malformed input rather than a numerical failure.
bool is_input_error(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace mulab
