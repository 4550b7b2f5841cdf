#pragma once

#include "conetess/precise.hpp"
#include "conetess/rational.hpp"

namespace conetess {

/// Number of d-dimensional cells cut out of R^d by n hyperplanes through the
/// origin in general position: 2 * sum_{r<d} binom(n-1, r), with the
/// conventions C(0,d) = 1 and C(n,d) = 0 for n < 0.
BigRational schlafli_count(long long n, int d);

/// Total number of k-faces of such a tessellation:
/// binom(n, d-k) * C(n-d+k, k). Equals 1 at n = d-k and 0 below.
BigRational face_count_total(long long n, int d, int k);

/// Probability that n i.i.d. symmetric points fail to positively span R^d:
/// C(n,d) / 2^n.
BigRational wendel_probability(long long n, int d);

/// Surface measure of the unit sphere S^{m-1}: 2 pi^{m/2} / Gamma(m/2),
/// with Gamma evaluated exactly at integer and half-integer arguments.
PreciseReal sphere_surface(int m);

/// The zero-cell angle constant
///   theta(n,d) = (omega_{d-1}/omega_d) * int_0^pi (1 - x/pi)^n sin^{d-2} x dx
/// for d >= 2, evaluated by adaptive quadrature to relative error <= 1e-30.
/// theta(0,d) = 1 exactly, theta(n,d) = 0 for n < 0, and for d = 1 the
/// convention theta(0,1) = 1, theta(n,1) = 1/2 is used (the integral form is
/// indeterminate there; this is the unique choice consistent with the planar
/// second-moment desk cases).
PreciseReal theta(long long n, int d);

/// Independent evaluation of theta for d >= 2 by binomial expansion into the
/// moment integrals int_0^pi x^i sin^m x dx, which reduce to closed forms in
/// pi. Used to cross-check the quadrature path.
PreciseReal theta_series(long long n, int d);

}  // namespace conetess
