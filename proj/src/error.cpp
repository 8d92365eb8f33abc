#include "mtra/error.hpp"

namespace mtra {

std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::DuplicateItemName: return "DuplicateItemName";
    case ErrorKind::TypeSizeMismatch: return "TypeSizeMismatch";
    case ErrorKind::MissingPreference: return "MissingPreference";
    case ErrorKind::UnknownName: return "UnknownName";
    case ErrorKind::CyclicPreference: return "CyclicPreference";
    case ErrorKind::CyclicDependency: return "CyclicDependency";
    case ErrorKind::IncompleteCPT: return "IncompleteCPT";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::UniverseMismatch: return "UniverseMismatch";
    case ErrorKind::TooManyAgentsForExact: return "TooManyAgentsForExact";
    case ErrorKind::InstanceTooLargeToDecide: return "InstanceTooLargeToDecide";
    case ErrorKind::MisreportSpaceTooLarge: return "MisreportSpaceTooLarge";
  }
  return "Error";
}

bool is_guard_violation(ErrorKind kind) {
  return kind == ErrorKind::TooManyAgentsForExact || kind == ErrorKind::InstanceTooLargeToDecide ||
         kind == ErrorKind::MisreportSpaceTooLarge;
}

}  // namespace mtra
