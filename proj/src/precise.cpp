#include "conetess/precise.hpp"

#include <boost/math/constants/constants.hpp>

#include <cmath>
#include <limits>
#include <sstream>

namespace conetess {

namespace {

// One rounding ulp of the working type, with head room.
double rounding_eps() {
  static const double eps =
      std::numeric_limits<Real100>::epsilon().convert_to<double>() * 4.0;
  return eps;
}

double mag(const Real100& v) {
  return boost::multiprecision::abs(v).convert_to<double>();
}

}  // namespace

PreciseReal::PreciseReal(Real100 value, double error_bound)
    : value_(std::move(value)), error_bound_(error_bound) {
  if (error_bound_ < 0) throw std::invalid_argument("negative error bound");
}

PreciseReal PreciseReal::from_rational(const BigRational& q) {
  Real100 v = Real100(numerator(q)) / Real100(denominator(q));
  return PreciseReal(v, rounding_eps() * mag(v));
}

PreciseReal PreciseReal::from_integer(const BigInt& v) {
  // cpp_bin_float_100 holds > 330 bits; integers of that size stay exact.
  Real100 x(v);
  double err = (msb(abs(v) + 1) < 320) ? 0.0 : rounding_eps() * mag(x);
  return PreciseReal(x, err);
}

PreciseReal PreciseReal::pi() {
  static const Real100 p = boost::math::constants::pi<Real100>();
  return PreciseReal(p, rounding_eps() * 4.0);
}

PreciseReal PreciseReal::operator+(const PreciseReal& o) const {
  Real100 v = value_ + o.value_;
  return PreciseReal(v, error_bound_ + o.error_bound_ + rounding_eps() * mag(v));
}

PreciseReal PreciseReal::operator-(const PreciseReal& o) const {
  Real100 v = value_ - o.value_;
  return PreciseReal(v, error_bound_ + o.error_bound_ + rounding_eps() * mag(v));
}

PreciseReal PreciseReal::operator*(const PreciseReal& o) const {
  Real100 v = value_ * o.value_;
  double err = mag(value_) * o.error_bound_ + mag(o.value_) * error_bound_ +
               error_bound_ * o.error_bound_ + rounding_eps() * mag(v);
  return PreciseReal(v, err);
}

PreciseReal PreciseReal::operator/(const PreciseReal& o) const {
  double den = mag(o.value_);
  if (den <= o.error_bound_)
    throw PrecisionError("division by a value indistinguishable from zero",
                         o.error_bound_);
  Real100 v = value_ / o.value_;
  double err = (error_bound_ + mag(v) * o.error_bound_) / (den - o.error_bound_) +
               rounding_eps() * mag(v);
  return PreciseReal(v, err);
}

PreciseReal PreciseReal::pow_int(long long e) const {
  if (e < 0) throw std::domain_error("pow_int: negative exponent");
  PreciseReal result(1);
  PreciseReal base = *this;
  while (e > 0) {
    if (e & 1) result *= base;
    base *= base;
    e >>= 1;
  }
  return result;
}

bool PreciseReal::agrees_with(const PreciseReal& o, double extra_tol) const {
  Real100 diff = boost::multiprecision::abs(value_ - o.value_);
  return diff.convert_to<double>() <= error_bound_ + o.error_bound_ + extra_tol;
}

std::string PreciseReal::to_string(int digits) const {
  std::ostringstream os;
  os.precision(digits);
  os << value_;
  return os.str();
}

PreciseReal sqrt(const PreciseReal& a) {
  if (a.value() < 0) throw std::domain_error("sqrt of negative value");
  Real100 v = boost::multiprecision::sqrt(a.value());
  double root = v.convert_to<double>();
  double err = (root > 0) ? a.error_bound() / (2 * root * 0.999)
                          : std::sqrt(a.error_bound());
  return PreciseReal(v, err + v.convert_to<double>() * 1e-95);
}

PreciseReal abs(const PreciseReal& a) {
  return PreciseReal(boost::multiprecision::abs(a.value()), a.error_bound());
}

}  // namespace conetess
