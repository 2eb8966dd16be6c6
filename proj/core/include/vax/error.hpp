#pragma once

#include <stdexcept>
#include <string>

namespace vax {

// Caller-facing failure: unreadable or malformed input, invalid parameters.
// The CLI maps it to exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A violated internal invariant. The CLI maps it to exit code 3.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace vax
