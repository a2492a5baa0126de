#include "tensoruq/error.hpp"

namespace tensoruq {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::unsupported_distribution: return "unsupported-distribution";
    case ErrorCode::out_of_range: return "out-of-range";
    case ErrorCode::under_resolved_quadrature: return "under-resolved-quadrature";
    case ErrorCode::basis_too_large: return "basis-too-large";
    case ErrorCode::shape_mismatch: return "shape-mismatch";
    case ErrorCode::not_in_basis: return "not-in-basis";
    case ErrorCode::grid_too_large: return "grid-too-large";
    case ErrorCode::empty_samples: return "empty-samples";
    case ErrorCode::duplicate_index: return "duplicate-index";
    case ErrorCode::parse_error: return "parse-error";
    case ErrorCode::io_error: return "io-error";
    case ErrorCode::non_convergence: return "non-convergence";
  }
  return "unknown";
}

}  // namespace tensoruq
