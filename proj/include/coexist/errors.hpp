#pragma once

#include <stdexcept>
#include <string>

namespace coexist {

/// Geometry precondition violated (e.g. an annulus that does not clear the TN cluster).
class GeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parameter outside its mathematical domain (negative counts, fractional m, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Conditioning on a zero-probability event, e.g. a serving BS at the farthest possible distance.
class DegenerateConditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Adaptive quadrature could not reach the requested tolerance.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace coexist
