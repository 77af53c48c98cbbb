#pragma once

#include <stdexcept>
#include <string>

namespace qma {

/// Malformed input: violated preconditions, bad config documents, unknown names.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// A numerical procedure failed (non-convergence, broken structure beyond tolerance).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qma
