#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace conetess {

using BigInt = boost::multiprecision::cpp_int;

/// Arbitrary-precision rational, always in lowest terms with positive
/// denominator. Carries every purely combinatorial quantity of the library.
using BigRational = boost::multiprecision::cpp_rational;

/// binom(n, k), with the convention that any out-of-range index gives 0.
BigInt binomial(long long n, long long k);

/// 2^e for e >= 0.
BigInt pow2(long long e);

/// "p/q", or just "p" when the denominator is 1.
std::string to_fraction_string(const BigRational& q);

double to_double(const BigRational& q);

}  // namespace conetess
