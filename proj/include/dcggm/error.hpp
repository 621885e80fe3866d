#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dcggm {

enum class ErrorKind {
  NotPositiveDefinite,
  InvalidK,
  DimensionMismatch,
  NonConvergence,
  EtaUnderflow,
  InvalidEdgeCount,
  GenerationFailed,
  ShrinkageFailed,
  InvalidFolds,
  InvalidArgument,
  Io,
  Schema,
};

constexpr std::string_view error_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::InvalidK: return "InvalidK";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::EtaUnderflow: return "EtaUnderflow";
    case ErrorKind::InvalidEdgeCount: return "InvalidEdgeCount";
    case ErrorKind::GenerationFailed: return "GenerationFailed";
    case ErrorKind::ShrinkageFailed: return "ShrinkageFailed";
    case ErrorKind::InvalidFolds: return "InvalidFolds";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Io: return "Io";
    case ErrorKind::Schema: return "Schema";
  }
  return "Unknown";
}

/// Single exception type for the library; `kind()` drives CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return error_name(kind_); }

  /// Usage-class errors (bad arguments) as opposed to numerical failures.
  bool is_validation() const noexcept {
    switch (kind_) {
      case ErrorKind::InvalidK:
      case ErrorKind::DimensionMismatch:
      case ErrorKind::InvalidEdgeCount:
      case ErrorKind::InvalidFolds:
      case ErrorKind::InvalidArgument:
      case ErrorKind::Io:
      case ErrorKind::Schema:
        return true;
      default:
        return false;
    }
  }

 private:
  ErrorKind kind_;
};

}  // namespace dcggm
