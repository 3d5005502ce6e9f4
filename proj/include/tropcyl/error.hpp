#pragma once

#include <stdexcept>
#include <string>

namespace tropcyl {

enum class ErrorCode {
  NotPrimitive,
  NotSmooth,
  NotComplete,
  TooFewRays,
  ZeroVector,
  AlreadyRay,
  LengthMismatch,
  NegativeMultiplicity,
  ModelMismatch,
  NonRepresentable,
  RayIndexOutOfRange,
  AffineInconsistent,
  NotATropicalCurve,
  SlopeNotRayDirection,
  PathThroughOrigin,
  NotUnimodular,
  ComponentOutOfRange,
  OutOfPrimitiveScope,
  AnchorOrderViolation,
  AnchorOnWall,
  IdentityViolation,
  ParseError,
};

const char* to_string(ErrorCode code);

// Single exception type for the library; the code distinguishes the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tropcyl
