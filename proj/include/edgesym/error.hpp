#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace edgesym {

enum class ErrorKind {
  InvalidArgument,
  LengthMismatch,
  CollinearPoints,
  NonCoplanar,
  DegeneratePolygon,
  PolygonInequality,
  DuplicateLabel,
  UnknownLabel,
  NotFullDimensional,
  NonExtremePoint,
  NumericFailure,
  IndexSetMismatch,
  EdgeCrossing,
  NonConvexBoundedFace,
  Disconnected,
  NonSimpleOuterBoundary,
  FaceNotOnBoundary,
  NotCombinatoriallyEquivalent,
  PermutationNotASymmetry,
  InconsistentTolerance,
  UnknownGalleryName,
  InvalidParameter,
  ParseError,
  IoError,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::CollinearPoints: return "CollinearPoints";
    case ErrorKind::NonCoplanar: return "NonCoplanar";
    case ErrorKind::DegeneratePolygon: return "DegeneratePolygon";
    case ErrorKind::PolygonInequality: return "PolygonInequality";
    case ErrorKind::DuplicateLabel: return "DuplicateLabel";
    case ErrorKind::UnknownLabel: return "UnknownLabel";
    case ErrorKind::NotFullDimensional: return "NotFullDimensional";
    case ErrorKind::NonExtremePoint: return "NonExtremePoint";
    case ErrorKind::NumericFailure: return "NumericFailure";
    case ErrorKind::IndexSetMismatch: return "IndexSetMismatch";
    case ErrorKind::EdgeCrossing: return "EdgeCrossing";
    case ErrorKind::NonConvexBoundedFace: return "NonConvexBoundedFace";
    case ErrorKind::Disconnected: return "Disconnected";
    case ErrorKind::NonSimpleOuterBoundary: return "NonSimpleOuterBoundary";
    case ErrorKind::FaceNotOnBoundary: return "FaceNotOnBoundary";
    case ErrorKind::NotCombinatoriallyEquivalent: return "NotCombinatoriallyEquivalent";
    case ErrorKind::PermutationNotASymmetry: return "PermutationNotASymmetry";
    case ErrorKind::InconsistentTolerance: return "InconsistentTolerance";
    case ErrorKind::UnknownGalleryName: return "UnknownGalleryName";
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace edgesym
