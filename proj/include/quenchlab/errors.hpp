#pragma once

#include <stdexcept>
#include <string>

namespace quenchlab {

// Invalid argument to an operation (bad sizes, out-of-range values).
struct ArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Occupation or key not present in a basis / table.
struct LookupError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

// Malformed product-state tokens or config text.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Operation not allowed on this kind of input (e.g. transverse field on a sector basis).
struct UsageError : std::logic_error {
  using std::logic_error::logic_error;
};

// Config passed syntax checks but violates a semantic constraint.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Propagation failed to reach the requested accuracy.
struct NumericsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Problem too large for the selected algorithm.
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace quenchlab
