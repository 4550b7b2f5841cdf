#pragma once

#include "conetess/functionals.hpp"

#include <optional>

namespace conetess {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Direction law on the sphere: isotropic (normalized standard Gaussian) or
/// an even anisotropic law (normalized Gaussian with diagonal scales). Both
/// are symmetric under x -> -x and atomless on great subspheres.
struct DirectionDistribution {
  enum class Kind { isotropic, anisotropic_gaussian };
  Kind kind = Kind::isotropic;
  Eigen::VectorXd scales;

  static DirectionDistribution isotropic() { return {}; }
  static DirectionDistribution anisotropic(Eigen::VectorXd scales);
  bool is_isotropic() const { return kind == Kind::isotropic; }
  Eigen::VectorXd sample(int d, RngStream& rng) const;
};

/// n i.i.d. unit normals, certified in general position (resampled on a
/// failed certificate, up to 10 times).
ArrangementPtr sample_arrangement(long long n, int d, const DirectionDistribution& dist,
                                  RngStream& rng, long long* resamples = nullptr);

/// Uniform pick among the cells of the tessellation.
ConeRep sample_schlafli(const ArrangementPtr& arr, RngStream& rng);

/// The cell containing the fixed direction e; empty when e lies within
/// tolerance of some hyperplane (a measure-zero event; resample the
/// arrangement).
std::optional<ConeRep> sample_e_cone(const ArrangementPtr& arr, const Eigen::VectorXd& e);

/// Rejection sampling of the spanned cone of n i.i.d. directions,
/// conditioned on not being all of R^d.
GeneratorCone sample_cover_efron_direct(long long n, int d,
                                        const DirectionDistribution& dist,
                                        RngStream& rng, long long* rejections = nullptr);

/// The dual route: generators of the dual of a uniform cell.
GeneratorCone sample_cover_efron_dual(const ArrangementPtr& arr, RngStream& rng);

/// Two-step weighted cone: draw a fresh arrangement and an independent
/// Haar-uniform k-subspace, pick a uniform j-face of the tessellation induced
/// in the subspace, then a uniform cell among the 2^{k-j} cells containing
/// its ambient face. Requires n > k - j.
ConeRep sample_weighted_Ckj(long long n, int d, int k, int j,
                            const DirectionDistribution& dist, RngStream& rng);

/// Second selection procedure (isotropic only): the k-subspace is chosen
/// uniformly among the intersections of d-k of the n hyperplanes, those
/// hyperplanes are removed, and the two-step selection runs against the
/// remaining n-d+k. Requires 1 <= j <= k <= d and n >= d - j. Returns a cell
/// of the reduced arrangement (R^d when n = d - k).
ConeRep sample_weighted_Dkj(long long n, int d, int k, int j, RngStream& rng);

}  // namespace conetess
