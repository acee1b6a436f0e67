#pragma once

#include <stdexcept>
#include <string>

namespace hamlab {

enum class ErrorKind {
  InvalidArgument,
  InvariantViolation,
  CriticalPoint,
  NonCompactLevelSet,
  MethodUnavailable,
  Stiffness,
  Divergence,
  NotConverged,
  Overflow,
  Config,
};

const char* to_string(ErrorKind kind);

class LabError : public std::runtime_error {
 public:
  LabError(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace hamlab
