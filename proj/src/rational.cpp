#include "conetess/rational.hpp"

#include <sstream>
#include <stdexcept>

namespace conetess {

BigInt binomial(long long n, long long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt result = 1;
  for (long long i = 0; i < k; ++i) {
    result *= n - i;
    result /= i + 1;
  }
  return result;
}

BigInt pow2(long long e) {
  if (e < 0) throw std::domain_error("pow2: negative exponent");
  return BigInt(1) << static_cast<unsigned>(e);
}

std::string to_fraction_string(const BigRational& q) {
  std::ostringstream os;
  os << numerator(q);
  if (denominator(q) != 1) os << '/' << denominator(q);
  return os.str();
}

double to_double(const BigRational& q) { return q.convert_to<double>(); }

}  // namespace conetess
