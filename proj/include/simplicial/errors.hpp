#pragma once

#include <stdexcept>
#include <string>

namespace simplicial {

// Size and argument violations. Derived from std::invalid_argument so call
// sites may catch either the library type or the std one.
class invalid_argument_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A matrix handed to a Cholesky-based routine was not symmetric positive
// definite.
class not_positive_definite_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Every candidate in a selection step had zero density, including the
// current state. Cannot happen for a chain started at finite density, so
// it indicates a broken target.
class impossible_state_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ESS is undefined for the given series (constant, or too short).
class undefined_ess_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Chain initial point has zero target density.
class invalid_start_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed external input (CSV rows, config files). The message names the
// offending location.
class parse_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace simplicial
