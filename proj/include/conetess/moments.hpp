#pragma once

#include "conetess/combinatorics.hpp"

#include <optional>
#include <vector>

namespace conetess {

/// Exact moment value: a rational for the theta-free formulas, a bounded
/// high-precision real for the theta-dependent ones. Exactly one is engaged.
struct MomentValue {
  std::optional<BigRational> rational;
  std::optional<PreciseReal> real;

  static MomentValue of(BigRational q) { return {std::move(q), std::nullopt}; }
  static MomentValue of(PreciseReal r) { return {std::nullopt, std::move(r)}; }

  bool is_rational() const { return rational.has_value(); }
  double to_double() const;
  double error_bound() const { return rational ? 0.0 : real->error_bound(); }
  PreciseReal to_precise() const;
  std::string to_string() const;
};

/// E Y_{d-k+j, d-k}(S_n) = 2^{k-j} C(n,k,j) / (2 C(n,d)), for 1 <= j <= k <= d
/// and n > k-j. Out-of-range n throws: the degenerate cases belong to the
/// specialized operations below.
MomentValue expected_Y(long long n, int d, int k, int j);

/// E f_k(S_n), k in [1,d]; explicit edge values 1 at n = d-k, 0 below.
MomentValue expected_f_schlafli(long long n, int d, int k);
/// E f_k(C_n), k in [0,d-1].
MomentValue expected_f_cover_efron(long long n, int d, int k);
/// E U_k(S_n), k in [0,d-1]; equals 1/2 whenever n <= d-k.
MomentValue expected_U_schlafli(long long n, int d, int k);
/// E U_k(C_n), k in [1,d-1]; equals 0 for n < k.
MomentValue expected_U_cover_efron(long long n, int d, int k);
/// E V_j(S_n), j in [0,d].
MomentValue expected_V_schlafli(long long n, int d, int j);
/// E V_j(C_n), j in [0,d].
MomentValue expected_V_cover_efron(long long n, int d, int j);
/// E Lambda_k(S_n), k in [1,d].
MomentValue expected_lambda_schlafli(long long n, int d, int k);
/// E Lambda_k(C_n), k in [1,d-1].
MomentValue expected_lambda_cover_efron(long long n, int d, int k);
/// E V_d(S_n^e) = theta(n,d).
MomentValue expected_Vd_e_cone(long long n, int d);
/// E Lambda_{d-k}(S_n^e) = binom(n,k) theta(n-k,d), k in [0,d-1];
/// 1 at n = k, 0 below.
MomentValue expected_lambda_e_cone(long long n, int d, int k);
/// E (Lambda_{d-k} V_d)(S_n) = binom(n,k) theta(n-k,d) / C(n,d), k in [0,d-1].
MomentValue mixed_lambda_Vd(long long n, int d, int k);

/// E (Lambda_s Lambda_r)(S_n) under the isotropic distribution, via the
/// form that is symmetric in r and s (production path):
///   C(n,d)^{-1} sum_p 2^{d-p} binom(n,d-p)
///               multinom(n-d+p; p-s, p-r, n-d-p+r+s) theta(n-d-p+r+s, p),
/// the multinomial vanishing whenever a lower index is negative.
MomentValue second_moment_lambda(long long n, int d, int s, int r);

/// Shadow evaluator for the same moment via the asymmetric form
///   binom(n,d-s)/C(n,d) sum_{p>=max(r,s)} 2^{d-p} binom(d-s,d-p)
///                       binom(n-d+s,p-r) theta(n-d-p+r+s, p);
/// must agree with the production path within combined bounds.
MomentValue second_moment_lambda_asym(long long n, int d, int s, int r);

/// Covariance matrix of (Lambda_1(S_n), ..., Lambda_d(S_n)); symmetric by
/// construction, entries carry propagated error bounds.
struct CovarianceMatrix {
  int d = 0;
  std::vector<PreciseReal> entries;  // row-major, d x d
  const PreciseReal& at(int r, int s) const;  // 1-based
};
CovarianceMatrix covariance_matrix_lambda(long long n, int d);

/// E f_{d-1}^2(C_n) = 4 E Lambda_1^2(S_n), valid for n >= d.
MomentValue second_moment_facets_cover_efron(long long n, int d);

}  // namespace conetess
