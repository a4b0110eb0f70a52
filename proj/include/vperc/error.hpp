#pragma once

#include <stdexcept>
#include <string>

namespace vperc {

enum class ErrorKind {
  invalid_parameter,
  degenerate_input,
  too_sparse,
  empty_domain,
  rect_outside_domain,
  indeterminate,
  precondition_failed,
  io,
};

const char* to_string(ErrorKind kind);

/// Every library failure surfaces as this exception; `kind()` is stable and
/// is what callers (and the CLI exit-status logic) switch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_parameter: return "invalid-parameter";
    case ErrorKind::degenerate_input: return "degenerate-input";
    case ErrorKind::too_sparse: return "too-sparse-for-torus";
    case ErrorKind::empty_domain: return "empty-domain";
    case ErrorKind::rect_outside_domain: return "rect-outside-domain";
    case ErrorKind::indeterminate: return "indeterminate";
    case ErrorKind::precondition_failed: return "precondition-failed";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

}  // namespace vperc
