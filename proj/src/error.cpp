#include "tropcyl/error.hpp"

namespace tropcyl {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotPrimitive: return "NotPrimitive";
    case ErrorCode::NotSmooth: return "NotSmooth";
    case ErrorCode::NotComplete: return "NotComplete";
    case ErrorCode::TooFewRays: return "TooFewRays";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::AlreadyRay: return "AlreadyRay";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NegativeMultiplicity: return "NegativeMultiplicity";
    case ErrorCode::ModelMismatch: return "ModelMismatch";
    case ErrorCode::NonRepresentable: return "NonRepresentable";
    case ErrorCode::RayIndexOutOfRange: return "RayIndexOutOfRange";
    case ErrorCode::AffineInconsistent: return "AffineInconsistent";
    case ErrorCode::NotATropicalCurve: return "NotATropicalCurve";
    case ErrorCode::SlopeNotRayDirection: return "SlopeNotRayDirection";
    case ErrorCode::PathThroughOrigin: return "PathThroughOrigin";
    case ErrorCode::NotUnimodular: return "NotUnimodular";
    case ErrorCode::ComponentOutOfRange: return "ComponentOutOfRange";
    case ErrorCode::OutOfPrimitiveScope: return "OutOfPrimitiveScope";
    case ErrorCode::AnchorOrderViolation: return "AnchorOrderViolation";
    case ErrorCode::AnchorOnWall: return "AnchorOnWall";
    case ErrorCode::IdentityViolation: return "IdentityViolation";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace tropcyl
