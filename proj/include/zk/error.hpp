#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace zk {

enum class ErrorKind {
  InvalidArgument,
  ZeroModeSingularity,
  BlowUp,
  WindowTooShort,
  SupportLeakage,
  ParameterRange,
  Resolution,
  EmptyShell,
  PreconditionViolated,
  Overflow,
  InsufficientSpan,
  Unresolved,
  Io,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so callers (the CLI in
/// particular) can map it onto an exit status without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::ZeroModeSingularity: return "zero-mode singularity";
    case ErrorKind::BlowUp: return "blow-up suspected";
    case ErrorKind::WindowTooShort: return "window too short";
    case ErrorKind::SupportLeakage: return "support leakage";
    case ErrorKind::ParameterRange: return "parameter range";
    case ErrorKind::Resolution: return "resolution";
    case ErrorKind::EmptyShell: return "empty shell";
    case ErrorKind::PreconditionViolated: return "precondition violated";
    case ErrorKind::Overflow: return "overflow";
    case ErrorKind::InsufficientSpan: return "insufficient span";
    case ErrorKind::Unresolved: return "unresolved";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

}  // namespace zk
