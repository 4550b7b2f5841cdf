#pragma once

#include "conetess/rational.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <stdexcept>
#include <string>

namespace conetess {

/// Working scalar of the high-precision layer: ~100 significant decimal digits.
using Real100 = boost::multiprecision::cpp_bin_float_100;

/// Thrown when a requested tolerance cannot be certified; carries the bound
/// that was actually achieved.
struct PrecisionError : std::runtime_error {
  double achieved;
  PrecisionError(const std::string& what, double achieved_bound)
      : std::runtime_error(what), achieved(achieved_bound) {}
};

/// A high-precision value together with a conservatively propagated absolute
/// error bound (midpoint/radius style). Every arithmetic operation grows the
/// bound by the incoming bounds plus one rounding ulp of the result.
class PreciseReal {
 public:
  PreciseReal() : value_(0), error_bound_(0) {}
  explicit PreciseReal(long long v) : value_(v), error_bound_(0) {}
  PreciseReal(Real100 value, double error_bound);

  static PreciseReal from_rational(const BigRational& q);
  static PreciseReal from_integer(const BigInt& v);
  static PreciseReal pi();

  const Real100& value() const { return value_; }
  double error_bound() const { return error_bound_; }
  double to_double() const { return value_.convert_to<double>(); }

  PreciseReal operator-() const { return PreciseReal(-value_, error_bound_); }
  PreciseReal operator+(const PreciseReal& o) const;
  PreciseReal operator-(const PreciseReal& o) const;
  PreciseReal operator*(const PreciseReal& o) const;
  PreciseReal operator/(const PreciseReal& o) const;

  PreciseReal& operator+=(const PreciseReal& o) { return *this = *this + o; }
  PreciseReal& operator-=(const PreciseReal& o) { return *this = *this - o; }
  PreciseReal& operator*=(const PreciseReal& o) { return *this = *this * o; }
  PreciseReal& operator/=(const PreciseReal& o) { return *this = *this / o; }

  /// Integer power by binary exponentiation, e >= 0.
  PreciseReal pow_int(long long e) const;

  /// |a - b| within the combined error bounds plus an extra slack.
  bool agrees_with(const PreciseReal& o, double extra_tol = 0.0) const;

  /// Decimal rendering with the given number of significant digits.
  std::string to_string(int digits = 25) const;

 private:
  Real100 value_;
  double error_bound_;
};

PreciseReal sqrt(const PreciseReal& a);
PreciseReal abs(const PreciseReal& a);

}  // namespace conetess
