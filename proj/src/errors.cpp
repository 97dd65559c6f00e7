#include "errors.hpp"

namespace halfline {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::dimension_mismatch: return "dimension-mismatch";
    case ErrorKind::singular_matrix: return "singular-matrix";
    case ErrorKind::hermiticity_violation: return "hermiticity-violation";
    case ErrorKind::positivity_violation: return "positivity-violation";
    case ErrorKind::out_of_range: return "out-of-range";
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::resolution: return "resolution";
    case ErrorKind::divergence: return "divergence";
    case ErrorKind::bound_states_present: return "bound-states-present";
    case ErrorKind::blow_up: return "blow-up";
    case ErrorKind::config: return "config";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

}  // namespace halfline
