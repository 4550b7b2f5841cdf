#pragma once

#include "conetess/functionals.hpp"

#include <string>

namespace conetess {

struct IdentityCheckResult {
  std::string name;
  double lhs = 0, rhs = 0;
  double residual = 0;
  double tolerance = 0;
  bool pass = false;
};

/// Face-content decomposition identity for the reduced tessellations around
/// a fixed j-dimensional intersection subspace L_j: the total r-content of
/// the cells meeting L_j after deleting d-k of its defining hyperplanes
/// equals a weighted sum of r-contents of sections of the cells of the fully
/// reduced tessellation. Tautological at k = j. Passes when the residual is
/// within 4 combined standard errors (plus a 1e-10 floor for exact paths).
/// subspace_indices lists the d-j hyperplanes defining L_j (defaults to the
/// first d-j when empty).
IdentityCheckResult check_identity_73(const ArrangementPtr& arr, int j, int k, int r,
                                      std::vector<int> subspace_indices,
                                      int mc_samples, RngStream& rng);

/// Conjugate-face tiling: for every choice of k hyperplanes, the 2^k
/// simplicial cones spanned by the signed normals tile their k-dimensional
/// span, so their solid angles sum to 1. Returns the worst deviation over
/// all k-subsets.
IdentityCheckResult check_tiling_CE1(const ArrangementPtr& arr, int k,
                                     int mc_samples, RngStream& rng);

/// Per-cell duality U_j(C) + U_{d-j}(C*) = 1/2, both sides estimated by
/// independent subspace-hitting Monte Carlo.
IdentityCheckResult check_cell_duality(const ConeRep& cell, int j, int mc_samples,
                                       RngStream& rng);

/// Crofton consistency: the Monte Carlo U_j against the alternating
/// intrinsic-volume sum V_{j+1} + V_{j+3} + ...
IdentityCheckResult check_crofton(const ConeRep& cell, int j, int mc_samples,
                                  RngStream& rng);

}  // namespace conetess
