#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace raycut {

enum class Errc {
  kUnsupportedDimension,
  kUnsupportedEncoding,
  kUnsupportedType,
  kMalformedHeader,
  kSizeMismatch,
  kNonAxisAlignedDirections,
  kIo,
  kSeedOutsideVolume,
  kSubdivTooLarge,
  kMalformedCut,
  kDegenerateMesh,
  kGeometryMismatch,
  kEmptyInput,
  kInvalidArgument,
};

std::string_view to_string(Errc code);

/// Every failure raised by the library carries one of the codes above so
/// callers (CLI exit codes, HTTP status mapping) can dispatch on it.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace raycut
