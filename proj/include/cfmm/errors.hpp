#pragma once

#include <stdexcept>
#include <string>

namespace cfmm {

/// Input outside the domain of a predicate or formula (e.g. a zero LP supply).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed system, catalog or dominance specification.
class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TickMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class GridError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cfmm
