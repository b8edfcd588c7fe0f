#pragma once

#include <stdexcept>

namespace ftnisac {

/// Thrown when a matrix factorization hits a non-positive pivot, i.e. the
/// problem is numerically singular at working precision. Callers should not
/// silently regularize; the condition is reported instead.
class ConditioningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ftnisac
