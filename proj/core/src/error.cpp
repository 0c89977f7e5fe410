#include "raycut/error.hpp"

namespace raycut {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::kUnsupportedDimension: return "UnsupportedDimension";
    case Errc::kUnsupportedEncoding: return "UnsupportedEncoding";
    case Errc::kUnsupportedType: return "UnsupportedType";
    case Errc::kMalformedHeader: return "MalformedHeader";
    case Errc::kSizeMismatch: return "SizeMismatch";
    case Errc::kNonAxisAlignedDirections: return "NonAxisAlignedDirections";
    case Errc::kIo: return "IoError";
    case Errc::kSeedOutsideVolume: return "SeedOutsideVolume";
    case Errc::kSubdivTooLarge: return "SubdivTooLarge";
    case Errc::kMalformedCut: return "MalformedCut";
    case Errc::kDegenerateMesh: return "DegenerateMesh";
    case Errc::kGeometryMismatch: return "GeometryMismatch";
    case Errc::kEmptyInput: return "EmptyInput";
    case Errc::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace raycut
