#pragma once

#include <stdexcept>
#include <string>

namespace halfline {

enum class ErrorKind {
  dimension_mismatch,
  singular_matrix,
  hermiticity_violation,
  positivity_violation,
  out_of_range,
  invalid_argument,
  resolution,
  divergence,
  bound_states_present,
  blow_up,
  config,
  io,
};

const char* error_kind_name(ErrorKind kind);

// Numerical failures carry the offending measurement when there is one.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, double measured = 0.0)
      : std::runtime_error(what), kind_(kind), measured_(measured) {}

  ErrorKind kind() const { return kind_; }
  double measured() const { return measured_; }

 private:
  ErrorKind kind_;
  double measured_;
};

}  // namespace halfline
