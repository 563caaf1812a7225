#pragma once

#include <stdexcept>
#include <string>

namespace spgemm {

/// Caller supplied arguments that violate an operation's preconditions.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// Malformed or unsupported file content.
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

/// A kernel asked the vector machine to do something illegal (out-of-bounds
/// indexed access, conflicting scatter, operand length mismatch). Always a
/// kernel bug, never a data problem.
class ModelFault : public std::logic_error {
 public:
  explicit ModelFault(const std::string& what) : std::logic_error(what) {}
};

/// An internal invariant did not hold (e.g. a hash table filled up).
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace spgemm
