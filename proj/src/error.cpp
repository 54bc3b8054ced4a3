#include "normproj/error.hpp"

namespace normproj {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::ModelNotReady: return "ModelNotReady";
    case Errc::NotSmoothHere: return "NotSmoothHere";
    case Errc::NotStrictlyConvex: return "NotStrictlyConvex";
    case Errc::GlueFailed: return "GlueFailed";
    case Errc::KernelMismatch: return "KernelMismatch";
    case Errc::DegenerateSplitting: return "DegenerateSplitting";
    case Errc::TooLarge: return "TooLarge";
    case Errc::NotContracting: return "NotContracting";
    case Errc::UnderResolved: return "UnderResolved";
    case Errc::LowQualityFit: return "LowQualityFit";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace normproj
