#include "conetess/identities.hpp"

#include <cmath>

namespace conetess {

namespace {

IdentityCheckResult gate(std::string name, const AngleEstimate& lhs,
                         const AngleEstimate& rhs, double floor = 1e-10) {
  IdentityCheckResult out;
  out.name = std::move(name);
  out.lhs = lhs.value;
  out.rhs = rhs.value;
  out.residual = std::abs(lhs.value - rhs.value);
  double se = std::sqrt(lhs.standard_error * lhs.standard_error +
                        rhs.standard_error * rhs.standard_error);
  out.tolerance = 4 * se + floor;
  out.pass = out.residual <= out.tolerance;
  return out;
}

// Cells of the reduced arrangement meeting the subspace spanned by `basis`
// nontrivially.
std::vector<int> cells_meeting(const std::vector<ConeRep>& cells,
                               const Eigen::MatrixXd& basis, RngStream& rng) {
  std::vector<int> out;
  for (size_t c = 0; c < cells.size(); ++c) {
    const ConeRep& cell = cells[c];
    const int n = static_cast<int>(cell.signs.size());
    Eigen::MatrixXd rows(n, basis.cols());
    for (int i = 0; i < n; ++i)
      rows.row(i) = cell.signs(i) * (cell.arr->normal(i).transpose() * basis);
    if (cone_has_nonzero_point(rows, rng.unit_vector(static_cast<int>(basis.cols()))))
      out.push_back(static_cast<int>(c));
  }
  return out;
}

// Lambda_r of the section of a cell by a subspace with orthonormal basis B.
AngleEstimate lambda_of_section(const ConeRep& cell, const Eigen::MatrixXd& basis,
                                int r, int mc_samples, RngStream& rng) {
  const int p = static_cast<int>(basis.cols());
  const int n = static_cast<int>(cell.signs.size());
  Eigen::MatrixXd rows(n, p);
  int cnt = 0;
  for (int i = 0; i < n; ++i) {
    Eigen::RowVectorXd v = cell.signs(i) * (cell.arr->normal(i).transpose() * basis);
    double norm = v.norm();
    if (norm < 1e-11) continue;
    rows.row(cnt++) = v / norm;
  }
  rows.conservativeResize(cnt, p);
  if (r > p) return AngleEstimate{0.0, 0.0, AngleMethod::exact1d};
  auto lambda = lambda_vector_span(rows, p, mc_samples, rng);
  return lambda[r - 1];
}

}  // namespace

IdentityCheckResult check_identity_73(const ArrangementPtr& arr, int j, int k, int r,
                                      std::vector<int> subspace_indices,
                                      int mc_samples, RngStream& rng) {
  const int d = arr->dim();
  const long long n = arr->size();
  if (j < 1 || j > d - 1) throw std::domain_error("check_identity_73: j in [1, d-1]");
  if (k < j || k > d) throw std::domain_error("check_identity_73: k in [j, d]");
  if (r < 1 || r > d) throw std::domain_error("check_identity_73: r in [1, d]");
  if (n <= d - j) throw std::domain_error("check_identity_73: needs n > d - j");
  if (subspace_indices.empty())
    for (int i = 0; i < d - j; ++i) subspace_indices.push_back(i);
  if (static_cast<int>(subspace_indices.size()) != d - j)
    throw std::domain_error("check_identity_73: need d - j subspace indices");

  Eigen::MatrixXd defining(d, d - j);
  for (int i = 0; i < d - j; ++i) defining.col(i) = arr->normal(subspace_indices[i]);
  Eigen::MatrixXd lj_basis = nullspace_basis(defining);  // d x j

  // Left side: delete the last d-k defining hyperplanes, keep the first k-j.
  std::vector<int> keep_front(subspace_indices.begin(), subspace_indices.begin() + (k - j));
  std::vector<int> drop_lhs(subspace_indices.begin() + (k - j), subspace_indices.end());
  std::sort(drop_lhs.begin(), drop_lhs.end());
  ArrangementPtr lhs_arr = arrangement_without(arr, drop_lhs);
  auto lhs_cells = enumerate_cells(lhs_arr);
  std::vector<AngleEstimate> lhs_parts;
  for (int c : cells_meeting(lhs_cells, lj_basis, rng)) {
    auto lambda = lambda_vector(lhs_cells[c], mc_samples, rng);
    lhs_parts.push_back(lambda[r - 1]);
  }
  AngleEstimate lhs = angle_sum(lhs_parts);

  // Right side: delete all defining hyperplanes; section the surviving cells
  // that meet L_j by subsets of the kept defining hyperplanes.
  std::vector<int> drop_all = subspace_indices;
  std::sort(drop_all.begin(), drop_all.end());
  ArrangementPtr base_arr = arrangement_without(arr, drop_all);
  auto base_cells = enumerate_cells(base_arr);
  std::vector<int> meeting = cells_meeting(base_cells, lj_basis, rng);

  std::vector<AngleEstimate> rhs_parts;
  const int few = k - j;
  for (int p = std::max(r, d - k + j); p <= d; ++p) {
    const int take = d - p;
    if (take > few) continue;
    double weight = std::pow(2.0, d - p);
    std::vector<int> idx(take);
    for (int i = 0; i < take; ++i) idx[i] = i;
    while (true) {
      Eigen::MatrixXd section_basis;
      if (take == 0) {
        section_basis = Eigen::MatrixXd::Identity(d, d);
      } else {
        Eigen::MatrixXd cut(d, take);
        for (int i = 0; i < take; ++i) cut.col(i) = arr->normal(keep_front[idx[i]]);
        section_basis = nullspace_basis(cut);
      }
      for (int c : meeting) {
        AngleEstimate part =
            lambda_of_section(base_cells[c], section_basis, r, mc_samples, rng);
        part.value *= weight;
        part.standard_error *= weight;
        rhs_parts.push_back(part);
      }
      if (take == 0) break;
      int pos = take - 1;
      while (pos >= 0 && idx[pos] == few - take + pos) --pos;
      if (pos < 0) break;
      ++idx[pos];
      for (int i = pos + 1; i < take; ++i) idx[i] = idx[i - 1] + 1;
    }
  }
  AngleEstimate rhs = angle_sum(rhs_parts);

  return gate("identity73(j=" + std::to_string(j) + ",k=" + std::to_string(k) +
                  ",r=" + std::to_string(r) + ")",
              lhs, rhs);
}

IdentityCheckResult check_tiling_CE1(const ArrangementPtr& arr, int k,
                                     int mc_samples, RngStream& rng) {
  const int d = arr->dim();
  const int n = arr->size();
  if (k < 1 || k > d) throw std::domain_error("check_tiling_CE1: k in [1, d]");
  if (n < k) throw std::domain_error("check_tiling_CE1: needs n >= k");

  IdentityCheckResult worst;
  worst.name = "tilingCE1(k=" + std::to_string(k) + ")";
  worst.pass = true;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    std::vector<AngleEstimate> parts;
    for (int mask = 0; mask < (1 << k); ++mask) {
      Eigen::MatrixXd gens(d, k);
      for (int i = 0; i < k; ++i)
        gens.col(i) = ((mask >> i) & 1 ? 1.0 : -1.0) * arr->normal(idx[i]);
      parts.push_back(solid_angle(simplicial_cone(gens), mc_samples, rng));
    }
    AngleEstimate total = angle_sum(parts);
    AngleEstimate one{1.0, 0.0, AngleMethod::exact1d};
    IdentityCheckResult check = gate(worst.name, total, one);
    bool first = worst.tolerance == 0;
    if (first || check.residual > worst.residual) {
      worst.lhs = check.lhs;
      worst.rhs = check.rhs;
      worst.residual = check.residual;
      worst.tolerance = check.tolerance;
    }
    worst.pass = worst.pass && check.pass;

    int pos = k - 1;
    while (pos >= 0 && idx[pos] == n - k + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int i = pos + 1; i < k; ++i) idx[i] = idx[i - 1] + 1;
  }
  return worst;
}

IdentityCheckResult check_cell_duality(const ConeRep& cell, int j, int mc_samples,
                                       RngStream& rng) {
  const int d = cell.arr->dim();
  if (j < 1 || j > d - 1) throw std::domain_error("check_cell_duality: j in [1, d-1]");
  AngleEstimate uj = quermass(cell, j, mc_samples, rng);
  GeneratorCone dual{dual_generators(cell)};
  AngleEstimate udual = quermass(dual, d - j, mc_samples, rng);
  AngleEstimate lhs = angle_sum({uj, udual});
  AngleEstimate half{0.5, 0.0, AngleMethod::exact1d};
  return gate("duality(U_" + std::to_string(j) + ")", lhs, half);
}

IdentityCheckResult check_crofton(const ConeRep& cell, int j, int mc_samples,
                                  RngStream& rng) {
  const int d = cell.arr->dim();
  if (j < 0 || j > d - 1) throw std::domain_error("check_crofton: j in [0, d-1]");
  AngleEstimate mc = quermass(cell, j, mc_samples, rng);
  SpanCone sc = span_cone(cell);
  AngleEstimate crofton = quermass_crofton_span(
      sc.rows, static_cast<int>(sc.span.cols()), j, mc_samples, rng);
  return gate("crofton(U_" + std::to_string(j) + ")", mc, crofton);
}

}  // namespace conetess
