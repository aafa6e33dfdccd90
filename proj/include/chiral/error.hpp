#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace chiral {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  NotConverged,
  HorizonTooShort,
  Schema,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception type for everything the library rejects or fails to compute.
/// what() carries the human-readable detail; code() is stable for callers.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

}  // namespace chiral
