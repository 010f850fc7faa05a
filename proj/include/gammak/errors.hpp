#pragma once

#include <stdexcept>
#include <string>

namespace gammak {

/// Raised when a computation cannot certify its result at the requested
/// precision (near-singular determinant, truncation tail too large,
/// interpolation coefficients not close to integers, ...).
class precision_error : public std::runtime_error {
 public:
  explicit precision_error(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when an exact invariant that must hold by construction is violated.
class invariant_error : public std::logic_error {
 public:
  explicit invariant_error(const std::string& what) : std::logic_error(what) {}
};

}  // namespace gammak
