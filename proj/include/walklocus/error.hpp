#pragma once

#include <stdexcept>
#include <string>

namespace walklocus {

// Invalid input or configuration. The CLI maps this to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A simulation or exact computation ran past its configured budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An input graph violates a structural precondition (disconnected, unknown edge).
class GraphError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace walklocus
