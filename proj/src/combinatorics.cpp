#include "conetess/combinatorics.hpp"

#include "conetess/quadrature.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

namespace conetess {

BigRational schlafli_count(long long n, int d) {
  if (d < 1) throw std::domain_error("schlafli_count: d must be >= 1");
  if (n < 0) return 0;
  if (n == 0) return 1;
  BigInt sum = 0;
  for (int r = 0; r < d; ++r) sum += binomial(n - 1, r);
  return BigRational(2 * sum);
}

BigRational face_count_total(long long n, int d, int k) {
  if (d < 1) throw std::domain_error("face_count_total: d must be >= 1");
  if (k < 1 || k > d) throw std::domain_error("face_count_total: k must lie in [1, d]");
  return BigRational(binomial(n, d - k)) * schlafli_count(n - d + k, k);
}

BigRational wendel_probability(long long n, int d) {
  if (n < 0) throw std::domain_error("wendel_probability: n must be >= 0");
  if (d < 1) throw std::domain_error("wendel_probability: d must be >= 1");
  return schlafli_count(n, d) / BigRational(pow2(n));
}

namespace {

// Gamma(m/2) for m >= 1, via Gamma(1/2) = sqrt(pi) and the recursion
// Gamma(x+1) = x Gamma(x). Only these arguments occur in the library.
PreciseReal gamma_half(int m) {
  if (m == 1) return sqrt(PreciseReal::pi());
  if (m == 2) return PreciseReal(1);
  PreciseReal half_arg = PreciseReal(m - 2) / PreciseReal(2);
  return half_arg * gamma_half(m - 2);
}

PreciseReal theta_quadrature(long long n, int d) {
  PreciseReal ratio = sphere_surface(d - 1) / sphere_surface(d);
  const Real100 pi_v = PreciseReal::pi().value();
  auto integrand = [&](const Real100& x) -> Real100 {
    Real100 base = 1 - x / pi_v;
    Real100 p = 1;
    long long e = n;
    Real100 b = base;
    while (e > 0) {
      if (e & 1) p *= b;
      b *= b;
      e >>= 1;
    }
    if (d > 2) {
      Real100 s = sin(x);
      Real100 sp = 1;
      int m = d - 2;
      Real100 sb = s;
      while (m > 0) {
        if (m & 1) sp *= sb;
        sb *= sb;
        m >>= 1;
      }
      p *= sp;
    }
    return p;
  };
  QuadratureResult q =
      integrate_adaptive(integrand, Real100(0), pi_v, Real100("1e-35"));
  PreciseReal integral(q.value, q.error_estimate.convert_to<double>() +
                                    q.value.convert_to<double>() * 1e-90);
  PreciseReal result = ratio * integral;
  double rel = result.error_bound() /
               std::max(std::abs(result.to_double()), 1e-300);
  if (rel > 1e-30)
    throw PrecisionError("theta: quadrature tolerance not reached", rel);
  return result;
}

}  // namespace

PreciseReal sphere_surface(int m) {
  if (m < 1) throw std::domain_error("sphere_surface: m must be >= 1");
  PreciseReal pi = PreciseReal::pi();
  // pi^{m/2} = pi^{floor(m/2)} * sqrt(pi)^{m mod 2}
  PreciseReal p = pi.pow_int(m / 2);
  if (m % 2) p *= sqrt(pi);
  return PreciseReal(2) * p / gamma_half(m);
}

PreciseReal theta(long long n, int d) {
  if (d < 1) throw std::domain_error("theta: d must be >= 1");
  if (n < 0) return PreciseReal(0);
  if (n == 0) return PreciseReal(1);
  if (d == 1) return PreciseReal(1) / PreciseReal(2);

  static std::mutex mu;
  static std::map<std::pair<long long, int>, PreciseReal> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({n, d});
    if (it != cache.end()) return it->second;
  }
  PreciseReal result = theta_quadrature(n, d);
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(std::make_pair(n, d), result);
  return result;
}

namespace {

// A(i,k) = int_0^pi x^i cos(kx) dx and B(i,k) = int_0^pi x^i sin(kx) dx for
// k >= 1, by the mutual recursion obtained from integration by parts.
struct TrigMoments {
  std::vector<PreciseReal> A, B;  // index i
  TrigMoments(long long imax, int k, const PreciseReal& pi) {
    A.resize(imax + 1);
    B.resize(imax + 1);
    PreciseReal kk(k);
    int sgn = (k % 2 == 0) ? 1 : -1;  // (-1)^k
    A[0] = PreciseReal(0);
    B[0] = PreciseReal(1 - sgn) / kk;
    for (long long i = 1; i <= imax; ++i) {
      A[i] = PreciseReal(-i) / kk * B[i - 1];
      B[i] = PreciseReal(-sgn) * pi.pow_int(i) / kk + PreciseReal(i) / kk * A[i - 1];
    }
  }
};

}  // namespace

PreciseReal theta_series(long long n, int d) {
  if (d < 2) throw std::domain_error("theta_series: needs d >= 2");
  if (n < 0) return PreciseReal(0);
  const PreciseReal pi = PreciseReal::pi();
  const int m = d - 2;

  // J(i) = int_0^pi x^i sin^m x dx assembled from the finite Fourier
  // expansion of sin^m.
  std::vector<PreciseReal> J(n + 1);
  if (m == 0) {
    for (long long i = 0; i <= n; ++i) J[i] = pi.pow_int(i + 1) / PreciseReal(i + 1);
  } else {
    const PreciseReal scale = PreciseReal(2) / PreciseReal::from_integer(pow2(m));
    if (m % 2 == 0) {
      PreciseReal constant =
          PreciseReal::from_integer(binomial(m, m / 2)) / PreciseReal::from_integer(pow2(m));
      for (long long i = 0; i <= n; ++i)
        J[i] = constant * pi.pow_int(i + 1) / PreciseReal(i + 1);
      for (int t = 0; t < m / 2; ++t) {
        int freq = m - 2 * t;
        int sign = ((m / 2 - t) % 2 == 0) ? 1 : -1;
        PreciseReal coef = scale * PreciseReal(sign) * PreciseReal::from_integer(binomial(m, t));
        TrigMoments tm(n, freq, pi);
        for (long long i = 0; i <= n; ++i) J[i] += coef * tm.A[i];
      }
    } else {
      for (long long i = 0; i <= n; ++i) J[i] = PreciseReal(0);
      for (int t = 0; t <= (m - 1) / 2; ++t) {
        int freq = m - 2 * t;
        int sign = (((m - 1) / 2 - t) % 2 == 0) ? 1 : -1;
        PreciseReal coef = scale * PreciseReal(sign) * PreciseReal::from_integer(binomial(m, t));
        TrigMoments tm(n, freq, pi);
        for (long long i = 0; i <= n; ++i) J[i] += coef * tm.B[i];
      }
    }
  }

  // int_0^pi (1 - x/pi)^n sin^m x dx = sum_i binom(n,i) (-1/pi)^i J(i)
  PreciseReal integral(0);
  for (long long i = 0; i <= n; ++i) {
    PreciseReal term = PreciseReal::from_integer(binomial(n, i)) * J[i] / pi.pow_int(i);
    if (i % 2) term = -term;
    integral += term;
  }
  return sphere_surface(d - 1) / sphere_surface(d) * integral;
}

}  // namespace conetess
