#pragma once

#include <stdexcept>
#include <string>

namespace dagbandit {

// Bad argument or out-of-domain value supplied by the caller.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The search graph would become inconsistent (missing parent, cycle, childless selection).
class StructuralError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class DuplicateStateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An oracle could not produce a value (e.g. single-class data).
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dagbandit
