#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mtra {

enum class ErrorKind {
  // input errors
  Parse,
  DuplicateItemName,
  TypeSizeMismatch,
  MissingPreference,
  UnknownName,
  CyclicPreference,
  CyclicDependency,
  IncompleteCPT,
  DimensionMismatch,
  UniverseMismatch,
  // guard violations
  TooManyAgentsForExact,
  InstanceTooLargeToDecide,
  MisreportSpaceTooLarge,
};

std::string_view error_kind_name(ErrorKind kind);

// Guard violations are legal inputs that exceed an enumeration budget.
bool is_guard_violation(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace mtra
