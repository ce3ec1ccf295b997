#pragma once

#include <stdexcept>
#include <string>

namespace mocktrace {

// Input outside the mathematical domain of an operation (CLI exit code 1).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Caller broke a documented precondition on the shape of an argument.
struct ContractViolation : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Parameter beyond a documented precision or size ceiling.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Something theory says cannot happen did happen.
struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace mocktrace
