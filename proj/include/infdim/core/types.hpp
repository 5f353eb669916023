#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace infdim {

using Complex = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Two objects live in different ambient spaces (or bases) and cannot be combined.
class SpaceMismatch : public Error {
 public:
  using Error::Error;
};

/// The operator (or basis) lacks a requested capability, e.g. an exact SVD.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

/// Closed real interval [a, b] with a < b.
struct Interval {
  double a = 0.0;
  double b = 1.0;

  double length() const { return b - a; }
  double midpoint() const { return 0.5 * (a + b); }
  double half_length() const { return 0.5 * (b - a); }

  friend bool operator==(const Interval&, const Interval&) = default;
};

inline Interval make_interval(double a, double b) {
  if (!(a < b)) {
    throw InvalidArgument("degenerate interval [" + std::to_string(a) + ", " +
                          std::to_string(b) + "]");
  }
  return Interval{a, b};
}

}  // namespace infdim
