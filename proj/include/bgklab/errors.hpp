#pragma once

#include <stdexcept>
#include <string>

namespace bgklab {

/// Invalid user-supplied parameter (out of range, wrong sign, ...).
struct parameter_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Mismatched grid sizes or truncation orders between operands.
struct shape_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A computed quantity left its admissible domain (e.g. density reconstruction
/// turned non-positive during an iteration). Carries the offending value.
struct positivity_error : std::runtime_error {
  double value;
  double location;
  explicit positivity_error(const std::string& what, double value_ = 0.0,
                            double location_ = 0.0)
      : std::runtime_error(what), value(value_), location(location_) {}
};

/// The quadrature grid cannot support the requested expansion order.
struct conditioning_error : std::runtime_error {
  int suggested_order;
  explicit conditioning_error(const std::string& what, int suggested_order_)
      : std::runtime_error(what), suggested_order(suggested_order_) {}
};

}  // namespace bgklab
