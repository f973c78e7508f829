#pragma once

#include <stdexcept>
#include <string>

namespace qsp {

// Thrown when a state or gate violates a documented precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A configured size cap (qubits, cardinality, node budget) was hit.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A deadline set on a search or flow passed.
class Timeout : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qsp
