#pragma once

#include "conetess/solid_angle.hpp"

namespace conetess {

/// A cone given by generators (unit columns): pos{x_1, ..., x_n}. Functionals
/// are evaluated through its dual H-cone {y : <x_i, y> <= 0}, whose faces
/// pair with the faces of the generator cone under conjugation.
struct GeneratorCone {
  Eigen::MatrixXd generators;  // d x n
  int dim() const { return static_cast<int>(generators.rows()); }
};

/// r-face of an H-cone {z : rows z <= 0} in R^m: the tight row subset, an
/// orthonormal basis of the face span, and the remaining rows projected into
/// that span.
struct SpanFace {
  std::vector<int> active_rows;
  Eigen::MatrixXd basis;    // m x r
  Eigen::MatrixXd rows;     // projected constraints, in face coordinates
  Eigen::VectorXd witness;  // relative-interior point, in face coordinates
};

/// All r-faces for r in [1, m]; r = m returns the cone itself when it has
/// nonempty interior.
std::vector<SpanFace> span_faces(const Eigen::MatrixXd& rows, int m, int r);

/// Number of r-faces, r in [0, m] (a 0-face exists iff the cone is pointed).
int span_face_count(const Eigen::MatrixXd& rows, int m, int r);

/// V_j of {z : rows z <= 0} in R^m via the internal/external angle sum over
/// j-faces; V_m is the cone's own solid angle, V_0 the ambient solid angle
/// of the dual cone.
AngleEstimate intrinsic_volume_span(const Eigen::MatrixXd& rows, int m, int j,
                                    int mc_samples, RngStream& rng);
std::vector<AngleEstimate> intrinsic_volumes_span(const Eigen::MatrixXd& rows, int m,
                                                  int mc_samples, RngStream& rng);

/// U_j within the span, by the Crofton sum V_{j+1} + V_{j+3} + ...
AngleEstimate quermass_crofton_span(const Eigen::MatrixXd& rows, int m, int j,
                                    int mc_samples, RngStream& rng);

/// Lambda_1..Lambda_m: Lambda_r is the sum of the solid angles of the
/// r-faces in their own spans.
std::vector<AngleEstimate> lambda_vector_span(const Eigen::MatrixXd& rows, int m,
                                              int mc_samples, RngStream& rng);

// --- ConeRep front ends (cells and tessellation faces) ---

/// V_0..V_{span_dim} of the cone within its span (the values are intrinsic,
/// so this equals the ambient evaluation).
std::vector<AngleEstimate> intrinsic_volumes(const ConeRep& cone, int mc_samples,
                                             RngStream& rng);
std::vector<AngleEstimate> lambda_vector(const ConeRep& cone, int mc_samples,
                                         RngStream& rng);
AngleEstimate intrinsic_volume(const ConeRep& cone, int j, int mc_samples,
                               RngStream& rng);
int face_count(const ConeRep& cone, int k);

/// Monte Carlo U_j by uniform subspace hits: half the hit frequency of a
/// Haar-uniform (d-j)-subspace against the cone; exact 1/2 at j = 0.
/// The ambient estimator is used even for lower-dimensional faces.
AngleEstimate quermass(const ConeRep& cone, int j, int mc_samples, RngStream& rng);

/// Y_{k,j}: sum of U_j over the k-faces, with U_j evaluated in each face's
/// own span through the Crofton sum (exact for face dimension <= 3).
AngleEstimate size_functional_Y(const ConeRep& cone, int k, int j, int mc_samples,
                                RngStream& rng);

// --- generator-cone route ---

int face_count(const GeneratorCone& cone, int k);
AngleEstimate intrinsic_volume(const GeneratorCone& cone, int m, int mc_samples,
                               RngStream& rng);
std::vector<AngleEstimate> lambda_vector(const GeneratorCone& cone, int mc_samples,
                                         RngStream& rng);
AngleEstimate quermass(const GeneratorCone& cone, int j, int mc_samples,
                       RngStream& rng);

/// Combine independent estimates: sums add variances, products propagate
/// relative uncertainties.
AngleEstimate angle_sum(const std::vector<AngleEstimate>& parts);
AngleEstimate angle_product(const AngleEstimate& a, const AngleEstimate& b);

}  // namespace conetess
