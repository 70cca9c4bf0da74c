#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace collapse {

enum class ErrorKind {
  invalid_parameter,
  invalid_step,
  capacity,
  coverage,
  degenerate_kernel,
  kernel_regularization,
  collapsed_width,
  step_size,
  domain_escape,
  instability,
  resolution,
  precision,
  overlap,
  low_statistics,
  regime_violation,
};

std::string_view to_string(ErrorKind kind);

// Validation errors are caught before any computation; everything else is a
// numerical-regime failure discovered while running.
inline bool is_validation_error(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_parameter:
    case ErrorKind::invalid_step:
    case ErrorKind::capacity:
    case ErrorKind::coverage:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace collapse
