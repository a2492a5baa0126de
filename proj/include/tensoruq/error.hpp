#pragma once

#include <stdexcept>
#include <string>

namespace tensoruq {

enum class ErrorCode {
  invalid_argument,
  unsupported_distribution,
  out_of_range,
  under_resolved_quadrature,
  basis_too_large,
  shape_mismatch,
  not_in_basis,
  grid_too_large,
  empty_samples,
  duplicate_index,
  parse_error,
  io_error,
  non_convergence,
};

const char* to_string(ErrorCode code) noexcept;

/// Every failure raised by the library. The code distinguishes validation
/// problems (bad input) from numerical ones (non_convergence).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tensoruq
