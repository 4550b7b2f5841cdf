#pragma once

#include "conetess/linprog.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace conetess {

struct GeneralPositionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Provenance {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;
  std::string source = "unseeded";
};

/// n unit normal vectors in R^d defining hyperplanes through the origin.
/// Certification checks that every d-subset of normals has |det| above the
/// conditioning floor (for n < d, the smallest singular value instead), so
/// that the downstream combinatorial count assertions are exact theorems.
class Arrangement {
 public:
  Arrangement(Eigen::MatrixXd normals, Provenance provenance, bool certify = true);

  int dim() const { return static_cast<int>(normals_.rows()); }
  int size() const { return static_cast<int>(normals_.cols()); }
  const Eigen::MatrixXd& normals() const { return normals_; }
  Eigen::VectorXd normal(int i) const { return normals_.col(i); }
  bool certificate() const { return certified_; }
  const Provenance& provenance() const { return provenance_; }

  /// min |det| over d-subsets (or sigma_min for n < d); the certificate
  /// requires this to clear 1e-9.
  static double general_position_margin(const Eigen::MatrixXd& normals);

 private:
  Eigen::MatrixXd normals_;  // d x n, unit columns
  Provenance provenance_;
  bool certified_ = false;
};

using ArrangementPtr = std::shared_ptr<const Arrangement>;

ArrangementPtr make_arrangement(Eigen::MatrixXd normals, Provenance provenance = {},
                                bool certify = true);
/// Copy with the hyperplanes at the given (sorted) indices removed.
ArrangementPtr arrangement_without(const ArrangementPtr& arr,
                                   const std::vector<int>& drop);

/// A relatively open face of the tessellation, encoded by its sign vector:
/// signs(i) = +1/-1 places the face strictly on one side of hyperplane i
/// (sign * <u_i, x> < 0 on the relative interior), 0 puts it inside the
/// hyperplane. Cells carry no zeros.
struct ConeRep {
  ArrangementPtr arr;
  Eigen::VectorXi signs;
  Eigen::VectorXd interior_point;  // ambient witness in the relative interior
  int span_dim = 0;

  std::vector<int> active() const;
  bool is_cell() const { return span_dim == (arr ? arr->dim() : 0); }
};

/// All d-dimensional cells, built by inserting hyperplanes one at a time;
/// a cell splits iff both refined sign vectors are strictly feasible.
/// Throws GeneralPositionError if the count misses the exact cell count.
std::vector<ConeRep> enumerate_cells(const ArrangementPtr& arr);

/// All k-faces of the tessellation, k in [1, d]: for each (d-k)-subset of
/// hyperplanes, the cells of the arrangement induced in their intersection.
/// Throws GeneralPositionError on a face-count mismatch.
std::vector<ConeRep> enumerate_k_faces(const ArrangementPtr& arr, int k);

/// The k-faces of the tessellation whose closure lies in the given cell:
/// those whose sign vector matches the cell's on all inactive hyperplanes.
std::vector<ConeRep> faces_of_cell(const ConeRep& cell, int k);

/// Generators of the dual cone of a cell: the cell is the intersection of
/// halfspaces {sign_i <u_i, x> <= 0}, so its dual is pos{sign_i u_i}.
Eigen::MatrixXd dual_generators(const ConeRep& cell);

/// A polyhedral cone inside an orthonormal span: {span z : rows z <= 0}.
struct SpanCone {
  Eigen::MatrixXd span;  // d x m, orthonormal columns (m = span dimension)
  Eigen::MatrixXd rows;  // q x m, unit rows in span coordinates
};

/// Inequality description of a face/cell within its own span.
SpanCone span_cone(const ConeRep& cone);

/// pos{columns of generators} for linearly independent generators, as a
/// SpanCone in the span of the generators.
SpanCone simplicial_cone(const Eigen::MatrixXd& generators);

/// Orthonormal basis of the orthogonal complement of the given columns.
Eigen::MatrixXd nullspace_basis(const Eigen::MatrixXd& columns);

/// Low-level cell enumeration over raw normals (columns), no count check:
/// returns (sign vector, interior witness) pairs.
std::vector<std::pair<Eigen::VectorXi, Eigen::VectorXd>> enumerate_cells_core(
    const Eigen::MatrixXd& normals);

}  // namespace conetess
