#pragma once

#include <stdexcept>
#include <string>

namespace segi {

/// Thrown when a caller violates an operation's precondition
/// (dimension mismatch, out-of-range parameter, malformed file).
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// The initial generation produced no light on the detector, so the
/// cost-function normalization is undefined.
class DegenerateBaseline : public std::runtime_error {
 public:
  explicit DegenerateBaseline(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace segi
