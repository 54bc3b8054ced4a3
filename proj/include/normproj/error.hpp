#pragma once

#include <stdexcept>
#include <string>

namespace normproj {

enum class Errc {
  InvalidArgument,
  ModelNotReady,
  NotSmoothHere,
  NotStrictlyConvex,
  GlueFailed,
  KernelMismatch,
  DegenerateSplitting,
  TooLarge,
  NotContracting,
  UnderResolved,
  LowQualityFit,
};

const char* to_string(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace normproj
