#pragma once

#include <stdexcept>
#include <string>

namespace compcomp {

/// Bad arguments: out-of-range exponents, shape mismatches, non-finite data.
class InvalidInput : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine failed to converge or overflowed.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The operation is not defined for this kind of object.
class Unsupported : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// A subproblem has no finite minimizer.
class UnboundedSubproblem : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A stateful adversary was queried past its budget.
class Exhausted : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace compcomp
