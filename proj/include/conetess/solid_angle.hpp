#pragma once

#include "conetess/arrangement.hpp"
#include "conetess/rng.hpp"

namespace conetess {

enum class AngleMethod { exact1d, exact2d, exact3d, monte_carlo };

/// A solid-angle fraction in [0, 1] with its uncertainty. standard_error is
/// zero exactly when the method is one of the exact paths. Method names refer
/// to the effective pointed dimension after splitting off the lineality
/// space; a full subspace reports exact1d.
struct AngleEstimate {
  double value = 0;
  double standard_error = 0;
  AngleMethod method = AngleMethod::exact1d;
  bool exact() const { return method != AngleMethod::monte_carlo; }
};

/// Fraction of the unit sphere of the cone's span covered by
/// {z : rows z <= 0} (rows in span coordinates, span dimension span_dim).
/// Lineality is split off first; the pointed remainder is handled exactly in
/// dimension <= 3 (ray, planar wedge, spherical polygon via Girard's
/// theorem) and by Monte Carlo above, or as a fallback when the exact path
/// detects a degeneracy (logged and counted).
AngleEstimate solid_angle(const Eigen::MatrixXd& rows, int span_dim,
                          int mc_samples, RngStream& rng);

AngleEstimate solid_angle(const SpanCone& cone, int mc_samples, RngStream& rng);

/// Number of exact-path degeneracies that fell back to Monte Carlo.
long solid_angle_fallback_count();

/// sqrt(p(1-p)/N) with a Jeffreys-midpoint floor at empty or full counts.
double bernoulli_se(long hits, long samples);

}  // namespace conetess
