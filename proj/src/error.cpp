#include "hamlab/error.hpp"

namespace hamlab {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::InvariantViolation: return "invariant violation";
    case ErrorKind::CriticalPoint: return "critical point";
    case ErrorKind::NonCompactLevelSet: return "non-compact level set";
    case ErrorKind::MethodUnavailable: return "method unavailable";
    case ErrorKind::Stiffness: return "stiffness";
    case ErrorKind::Divergence: return "divergence";
    case ErrorKind::NotConverged: return "not converged";
    case ErrorKind::Overflow: return "overflow";
    case ErrorKind::Config: return "config";
  }
  return "error";
}

}  // namespace hamlab
