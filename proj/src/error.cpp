#include "chiral/error.hpp"

namespace chiral {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::DimensionMismatch: return "dimension_mismatch";
    case ErrorCode::NotConverged: return "not_converged";
    case ErrorCode::HorizonTooShort: return "horizon_too_short";
    case ErrorCode::Schema: return "schema";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

}  // namespace chiral
