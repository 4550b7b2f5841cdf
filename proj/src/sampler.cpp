#include "conetess/sampler.hpp"

#include "conetess/combinatorics.hpp"

#include <algorithm>

namespace conetess {

namespace {

constexpr double kEConeTol = 1e-12;

// Unrank the `rank`-th a-subset of {0..n-1} in lexicographic order.
std::vector<int> unrank_subset(long long rank, int n, int a, const BigInt& total) {
  (void)total;
  std::vector<int> out;
  int next = 0;
  BigInt remaining(rank);
  for (int slot = a; slot >= 1; --slot) {
    for (int v = next; v <= n - slot; ++v) {
      BigInt block = binomial(n - 1 - v, slot - 1);
      if (remaining < block) {
        out.push_back(v);
        next = v + 1;
        break;
      }
      remaining -= block;
    }
  }
  return out;
}

// Tessellation induced in the span of `basis` by the hyperplanes of `arr`:
// the projected, renormalized normals.
Eigen::MatrixXd induced_normals(const Arrangement& arr, const Eigen::MatrixXd& basis) {
  Eigen::MatrixXd induced(basis.cols(), arr.size());
  for (int i = 0; i < arr.size(); ++i) {
    Eigen::VectorXd v = basis.transpose() * arr.normal(i);
    double norm = v.norm();
    if (norm < 1e-9) throw GeneralPositionError("induced normal degenerates");
    induced.col(i) = v / norm;
  }
  return induced;
}

// Uniform j-face of the tessellation induced in span(basis): returns the
// local active set (hyperplane indices of arr) and an ambient witness in the
// face's relative interior.
struct InducedFace {
  std::vector<int> active;
  Eigen::VectorXd ambient_witness;
};

InducedFace pick_induced_face(const ArrangementPtr& arr, const Eigen::MatrixXd& basis,
                              int j, RngStream& rng) {
  const int k = static_cast<int>(basis.cols());
  Eigen::MatrixXd induced = induced_normals(*arr, basis);
  ArrangementPtr local = make_arrangement(induced, arr->provenance(), /*certify=*/false);
  auto faces = enumerate_k_faces(local, j);
  BigRational expected = face_count_total(arr->size(), k, j);
  if (BigRational(static_cast<long long>(faces.size())) != expected)
    throw GeneralPositionError("induced face count mismatch");
  const ConeRep& face = faces[rng.uniform_index(static_cast<long long>(faces.size()))];
  InducedFace out;
  out.active = face.active();
  out.ambient_witness = basis * face.interior_point;
  return out;
}

// Assemble the cell of `arr` containing the given face witness, choosing the
// side uniformly on each hyperplane the face lies in.
ConeRep assemble_cell(const ArrangementPtr& arr, const InducedFace& face,
                      RngStream& rng) {
  const int n = arr->size();
  std::vector<bool> is_active(n, false);
  for (int i : face.active) is_active[i] = true;
  ConeRep cell;
  cell.arr = arr;
  cell.signs.resize(n);
  for (int i = 0; i < n; ++i) {
    if (is_active[i]) {
      cell.signs(i) = rng.uniform_index(2) == 0 ? 1 : -1;
    } else {
      cell.signs(i) = arr->normal(i).dot(face.ambient_witness) < 0 ? 1 : -1;
    }
  }
  cell.span_dim = arr->dim();
  Eigen::MatrixXd rows(n, arr->dim());
  for (int i = 0; i < n; ++i)
    rows.row(i) = cell.signs(i) * arr->normal(i).transpose();
  InteriorPoint ip = strict_interior(rows);
  if (!ip.feasible) throw GeneralPositionError("weighted cone cell infeasible");
  cell.interior_point = ip.point;
  return cell;
}

}  // namespace

DirectionDistribution DirectionDistribution::anisotropic(Eigen::VectorXd scales) {
  DirectionDistribution out;
  out.kind = Kind::anisotropic_gaussian;
  out.scales = std::move(scales);
  return out;
}

Eigen::VectorXd DirectionDistribution::sample(int d, RngStream& rng) const {
  if (kind == Kind::isotropic) return rng.unit_vector(d);
  if (scales.size() != d)
    throw ConfigError("anisotropic distribution: scales must have length d");
  while (true) {
    Eigen::VectorXd v = rng.gaussian_vector(d).cwiseProduct(scales);
    double norm = v.norm();
    if (norm > 1e-12) return v / norm;
  }
}

ArrangementPtr sample_arrangement(long long n, int d, const DirectionDistribution& dist,
                                  RngStream& rng, long long* resamples) {
  if (d < 2) throw ConfigError("sample_arrangement: d must be >= 2");
  if (n < 0) throw ConfigError("sample_arrangement: n must be >= 0");
  for (int attempt = 0; attempt <= 10; ++attempt) {
    Eigen::MatrixXd normals(d, n);
    for (long long i = 0; i < n; ++i) normals.col(i) = dist.sample(d, rng);
    Provenance prov{rng.master_seed(), rng.stream_index(), "sampled"};
    try {
      return make_arrangement(std::move(normals), prov, /*certify=*/true);
    } catch (const GeneralPositionError&) {
      if (resamples) ++*resamples;
    }
  }
  throw ConfigError("sample_arrangement: repeated certification failure");
}

ConeRep sample_schlafli(const ArrangementPtr& arr, RngStream& rng) {
  auto cells = enumerate_cells(arr);
  return cells[rng.uniform_index(static_cast<long long>(cells.size()))];
}

std::optional<ConeRep> sample_e_cone(const ArrangementPtr& arr, const Eigen::VectorXd& e) {
  const int n = arr->size();
  ConeRep cell;
  cell.arr = arr;
  cell.signs.resize(n);
  for (int i = 0; i < n; ++i) {
    double dot = arr->normal(i).dot(e);
    if (std::abs(dot) < kEConeTol) return std::nullopt;
    cell.signs(i) = dot < 0 ? 1 : -1;
  }
  cell.interior_point = e;
  cell.span_dim = arr->dim();
  return cell;
}

GeneratorCone sample_cover_efron_direct(long long n, int d,
                                        const DirectionDistribution& dist,
                                        RngStream& rng, long long* rejections) {
  if (n < 1) throw ConfigError("sample_cover_efron_direct: n must be >= 1");
  while (true) {
    Eigen::MatrixXd points(d, n);
    for (long long i = 0; i < n; ++i) points.col(i) = dist.sample(d, rng);
    if (n <= d) return GeneratorCone{std::move(points)};  // never spans R^d
    // pos{X} != R^d iff the polar cone {x : <X_i, x> <= 0} has interior.
    if (strict_interior(points.transpose()).feasible)
      return GeneratorCone{std::move(points)};
    if (rejections) ++*rejections;
  }
}

GeneratorCone sample_cover_efron_dual(const ArrangementPtr& arr, RngStream& rng) {
  return GeneratorCone{dual_generators(sample_schlafli(arr, rng))};
}

ConeRep sample_weighted_Ckj(long long n, int d, int k, int j,
                            const DirectionDistribution& dist, RngStream& rng) {
  if (k < 1 || k > d || j < 1 || j > k)
    throw ConfigError("sample_weighted_Ckj: need 1 <= j <= k <= d");
  if (n <= k - j) throw ConfigError("sample_weighted_Ckj: needs n > k - j");
  ArrangementPtr arr = sample_arrangement(n, d, dist, rng);
  Eigen::MatrixXd basis = (k == d) ? Eigen::MatrixXd::Identity(d, d)
                                   : rng.orthonormal_frame(d, k);
  InducedFace face = pick_induced_face(arr, basis, j, rng);
  return assemble_cell(arr, face, rng);
}

ConeRep sample_weighted_Dkj(long long n, int d, int k, int j, RngStream& rng) {
  if (k < 1 || k > d || j < 1 || j > k)
    throw ConfigError("sample_weighted_Dkj: need 1 <= j <= k <= d");
  if (n < d - j) throw ConfigError("sample_weighted_Dkj: needs n >= d - j");
  DirectionDistribution iso;
  ArrangementPtr arr = sample_arrangement(n, d, iso, rng);

  const int a = d - k;
  BigInt total = binomial(n, a);
  long long pick = rng.uniform_index(total.convert_to<long long>());
  std::vector<int> subset = unrank_subset(pick, static_cast<int>(n), a, total);

  if (n - d + k == 0) {
    // Nothing remains: the selected cone is all of R^d.
    ConeRep whole;
    whole.arr = arrangement_without(arr, subset);
    whole.signs.resize(0);
    whole.interior_point = Eigen::VectorXd::Zero(d);
    whole.span_dim = d;
    return whole;
  }

  Eigen::MatrixXd defining(d, a);
  for (int i = 0; i < a; ++i) defining.col(i) = arr->normal(subset[i]);
  Eigen::MatrixXd basis = (a == 0) ? Eigen::MatrixXd::Identity(d, d)
                                   : nullspace_basis(defining);
  ArrangementPtr reduced = arrangement_without(arr, subset);
  InducedFace face = pick_induced_face(reduced, basis, j, rng);
  return assemble_cell(reduced, face, rng);
}

}  // namespace conetess
