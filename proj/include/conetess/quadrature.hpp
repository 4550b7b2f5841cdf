#pragma once

#include "conetess/precise.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace conetess {

/// Nodes and weights of the m-point Gauss-Legendre rule on [-1, 1], computed
/// at full working precision by Newton iteration and cached per order.
const std::vector<std::pair<Real100, Real100>>& gauss_legendre_rule(int order);

struct QuadratureResult {
  Real100 value;
  Real100 error_estimate;
  int panels;
};

/// Adaptive Gauss-Legendre on [a, b] with interval bisection. A panel is
/// accepted when the whole-panel estimate and the two-half estimate agree
/// within the panel's share of the absolute tolerance. Throws PrecisionError
/// when the requested relative tolerance cannot be certified.
QuadratureResult integrate_adaptive(const std::function<Real100(const Real100&)>& f,
                                    const Real100& a, const Real100& b,
                                    const Real100& rel_tol, int order = 24);

}  // namespace conetess
