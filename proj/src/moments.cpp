#include "conetess/moments.hpp"

#include <stdexcept>

namespace conetess {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::domain_error(msg);
}

BigRational half() { return BigRational(1, 2); }

// C(n,k,j): number of j-faces of a tessellation of R^k by n generic
// hyperplanes through the origin.
BigRational face_count(long long n, int k, int j) { return face_count_total(n, k, j); }

}  // namespace

double MomentValue::to_double() const {
  return rational ? conetess::to_double(*rational) : real->to_double();
}

PreciseReal MomentValue::to_precise() const {
  return rational ? PreciseReal::from_rational(*rational) : *real;
}

std::string MomentValue::to_string() const {
  return rational ? to_fraction_string(*rational) : real->to_string();
}

MomentValue expected_Y(long long n, int d, int k, int j) {
  require(d >= 1, "expected_Y: d must be >= 1");
  require(k >= 1 && k <= d, "expected_Y: k must lie in [1, d]");
  require(j >= 1 && j <= k, "expected_Y: j must lie in [1, k]");
  if (n <= k - j)
    throw std::out_of_range("expected_Y: needs n > k - j; use the specialized "
                            "operations for the degenerate range");
  return MomentValue::of(BigRational(pow2(k - j)) * face_count(n, k, j) /
                         (2 * schlafli_count(n, d)));
}

MomentValue expected_f_schlafli(long long n, int d, int k) {
  require(d >= 1 && k >= 1 && k <= d, "expected_f_schlafli: k must lie in [1, d]");
  if (n < d - k) return MomentValue::of(BigRational(0));
  if (n == d - k) return MomentValue::of(BigRational(1));
  return MomentValue::of(BigRational(pow2(d - k)) * BigRational(binomial(n, d - k)) *
                         schlafli_count(n - d + k, k) / schlafli_count(n, d));
}

MomentValue expected_f_cover_efron(long long n, int d, int k) {
  require(d >= 1 && k >= 0 && k <= d - 1, "expected_f_cover_efron: k must lie in [0, d-1]");
  require(n >= 0, "expected_f_cover_efron: n must be >= 0");
  return MomentValue::of(BigRational(pow2(k)) * BigRational(binomial(n, k)) *
                         schlafli_count(n - k, d - k) / schlafli_count(n, d));
}

MomentValue expected_U_schlafli(long long n, int d, int k) {
  require(d >= 1 && k >= 0 && k <= d - 1, "expected_U_schlafli: k must lie in [0, d-1]");
  if (n <= d - k) return MomentValue::of(half());
  return MomentValue::of(schlafli_count(n, d - k) / (2 * schlafli_count(n, d)));
}

MomentValue expected_U_cover_efron(long long n, int d, int k) {
  require(d >= 2 && k >= 1 && k <= d - 1, "expected_U_cover_efron: k must lie in [1, d-1]");
  if (n < k) return MomentValue::of(BigRational(0));
  return MomentValue::of((schlafli_count(n, d) - schlafli_count(n, k)) /
                         (2 * schlafli_count(n, d)));
}

MomentValue expected_V_schlafli(long long n, int d, int j) {
  require(d >= 1 && j >= 0 && j <= d, "expected_V_schlafli: j must lie in [0, d]");
  require(n >= 0, "expected_V_schlafli: n must be >= 0");
  BigInt num = (j >= 1) ? binomial(n, d - j) : binomial(n - 1, d - 1);
  return MomentValue::of(BigRational(num) / schlafli_count(n, d));
}

MomentValue expected_V_cover_efron(long long n, int d, int j) {
  require(d >= 1 && j >= 0 && j <= d, "expected_V_cover_efron: j must lie in [0, d]");
  require(n >= 0, "expected_V_cover_efron: n must be >= 0");
  BigInt num = (j <= d - 1) ? binomial(n, j) : binomial(n - 1, d - 1);
  return MomentValue::of(BigRational(num) / schlafli_count(n, d));
}

MomentValue expected_lambda_schlafli(long long n, int d, int k) {
  require(d >= 1 && k >= 1 && k <= d, "expected_lambda_schlafli: k must lie in [1, d]");
  require(n >= 0, "expected_lambda_schlafli: n must be >= 0");
  return MomentValue::of(BigRational(pow2(d - k)) * BigRational(binomial(n, d - k)) /
                         schlafli_count(n, d));
}

MomentValue expected_lambda_cover_efron(long long n, int d, int k) {
  require(d >= 2 && k >= 1 && k <= d - 1,
          "expected_lambda_cover_efron: k must lie in [1, d-1]");
  require(n >= 0, "expected_lambda_cover_efron: n must be >= 0");
  return MomentValue::of(BigRational(binomial(n, k)) * schlafli_count(n - k, d - k) /
                         schlafli_count(n, d));
}

MomentValue expected_Vd_e_cone(long long n, int d) {
  require(d >= 1, "expected_Vd_e_cone: d must be >= 1");
  return MomentValue::of(theta(n, d));
}

MomentValue expected_lambda_e_cone(long long n, int d, int k) {
  require(d >= 1 && k >= 0 && k <= d - 1, "expected_lambda_e_cone: k must lie in [0, d-1]");
  if (n < k) return MomentValue::of(BigRational(0));
  if (n == k) return MomentValue::of(BigRational(1));
  return MomentValue::of(PreciseReal::from_integer(binomial(n, k)) * theta(n - k, d));
}

MomentValue mixed_lambda_Vd(long long n, int d, int k) {
  require(d >= 1 && k >= 0 && k <= d - 1, "mixed_lambda_Vd: k must lie in [0, d-1]");
  require(n >= 0, "mixed_lambda_Vd: n must be >= 0");
  return MomentValue::of(PreciseReal::from_integer(binomial(n, k)) * theta(n - k, d) /
                         PreciseReal::from_rational(schlafli_count(n, d)));
}

MomentValue second_moment_lambda(long long n, int d, int s, int r) {
  require(d >= 1, "second_moment_lambda: d must be >= 1");
  require(s >= 1 && s <= d && r >= 1 && r <= d,
          "second_moment_lambda: r, s must lie in [1, d]");
  require(n >= 0, "second_moment_lambda: n must be >= 0");
  PreciseReal sum(0);
  for (int p = 1; p <= d; ++p) {
    if (p < s || p < r) continue;
    long long tail = n - d - p + r + s;
    if (tail < 0) continue;
    BigInt front = binomial(n, d - p);
    if (front == 0) continue;
    // multinom(n-d+p; p-s, p-r, tail)
    long long m = n - d + p;
    BigInt multi = binomial(m, p - s) * binomial(m - (p - s), p - r);
    if (multi == 0) continue;
    BigInt coeff = pow2(d - p) * front * multi;
    sum += PreciseReal::from_integer(coeff) * theta(tail, p);
  }
  return MomentValue::of(sum / PreciseReal::from_rational(schlafli_count(n, d)));
}

MomentValue second_moment_lambda_asym(long long n, int d, int s, int r) {
  require(d >= 1, "second_moment_lambda_asym: d must be >= 1");
  require(s >= 1 && s <= d && r >= 1 && r <= d,
          "second_moment_lambda_asym: r, s must lie in [1, d]");
  require(n >= 0, "second_moment_lambda_asym: n must be >= 0");
  PreciseReal sum(0);
  for (int p = std::max(r, s); p <= d; ++p) {
    long long tail = n - d - p + r + s;
    if (tail < 0) continue;
    BigInt coeff = pow2(d - p) * binomial(d - s, d - p) * binomial(n - d + s, p - r);
    if (coeff == 0) continue;
    sum += PreciseReal::from_integer(coeff) * theta(tail, p);
  }
  PreciseReal front = PreciseReal::from_integer(binomial(n, d - s)) /
                      PreciseReal::from_rational(schlafli_count(n, d));
  return MomentValue::of(front * sum);
}

const PreciseReal& CovarianceMatrix::at(int r, int s) const {
  if (r < 1 || r > d || s < 1 || s > d)
    throw std::out_of_range("CovarianceMatrix::at: indices are 1-based in [1, d]");
  return entries[(r - 1) * d + (s - 1)];
}

CovarianceMatrix covariance_matrix_lambda(long long n, int d) {
  require(d >= 1, "covariance_matrix_lambda: d must be >= 1");
  CovarianceMatrix cov;
  cov.d = d;
  cov.entries.assign(static_cast<size_t>(d) * d, PreciseReal(0));
  std::vector<PreciseReal> means(d + 1, PreciseReal(0));
  for (int k = 1; k <= d; ++k)
    means[k] = expected_lambda_schlafli(n, d, k).to_precise();
  for (int r = 1; r <= d; ++r) {
    for (int s = r; s <= d; ++s) {
      PreciseReal value =
          second_moment_lambda(n, d, s, r).to_precise() - means[r] * means[s];
      cov.entries[(r - 1) * d + (s - 1)] = value;
      cov.entries[(s - 1) * d + (r - 1)] = value;
    }
  }
  return cov;
}

MomentValue second_moment_facets_cover_efron(long long n, int d) {
  require(d >= 1, "second_moment_facets_cover_efron: d must be >= 1");
  if (n < d)
    throw std::out_of_range("second_moment_facets_cover_efron: needs n >= d");
  return MomentValue::of(PreciseReal(4) *
                         second_moment_lambda(n, d, 1, 1).to_precise());
}

}  // namespace conetess
