#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace memsosc {

enum class ErrorKind {
  invalid_spec,
  invalid_input,
  pull_in,
  numerical,
  invalid_perturbation,
  insufficient_data,
  no_growth,
  config,
  refused,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the toolkit; the kind lets callers map failures
/// onto exit codes or retry policy without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace memsosc
