#include "satotate/error.hpp"

namespace satotate {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::NotFound: return "not-found";
    case ErrorKind::Unsupported: return "unsupported";
    case ErrorKind::DescriptorInvalid: return "descriptor-invalid";
    case ErrorKind::NumericFailure: return "numeric-failure";
    case ErrorKind::BadReduction: return "bad-reduction";
    case ErrorKind::DataInvalid: return "data-invalid";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::InsufficientData: return "insufficient-data";
    case ErrorKind::BelowThreshold: return "below-threshold";
  }
  return "unknown";
}

}  // namespace satotate
