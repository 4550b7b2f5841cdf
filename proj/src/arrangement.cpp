#include "conetess/arrangement.hpp"

#include "conetess/combinatorics.hpp"

#include <algorithm>

namespace conetess {

namespace {

constexpr double kMinorFloor = 1e-9;
constexpr double kUnitTol = 1e-12;
constexpr double kWitnessMargin = 1e-7;

void check_count(const BigRational& expected, size_t got, const char* what) {
  if (BigRational(static_cast<long long>(got)) != expected) {
    throw GeneralPositionError(std::string(what) + ": enumeration found " +
                               std::to_string(got) + " but the exact count is " +
                               to_fraction_string(expected));
  }
}

// Sign rows for the feasibility system of a prefix of hyperplanes.
Eigen::MatrixXd signed_rows(const Eigen::MatrixXd& normals,
                            const Eigen::VectorXi& signs, int count) {
  Eigen::MatrixXd rows(count, normals.rows());
  for (int i = 0; i < count; ++i)
    rows.row(i) = signs(i) * normals.col(i).transpose();
  return rows;
}

}  // namespace

Arrangement::Arrangement(Eigen::MatrixXd normals, Provenance provenance, bool certify)
    : normals_(std::move(normals)), provenance_(std::move(provenance)) {
  const int d = dim();
  if (d < 1) throw std::invalid_argument("Arrangement: dimension must be >= 1");
  for (int i = 0; i < size(); ++i) {
    if (std::abs(normals_.col(i).norm() - 1.0) > kUnitTol)
      throw std::invalid_argument("Arrangement: normals must be unit vectors");
  }
  if (certify) {
    certified_ = general_position_margin(normals_) >= kMinorFloor;
    if (!certified_)
      throw GeneralPositionError("Arrangement: general-position certificate failed");
  }
}

double Arrangement::general_position_margin(const Eigen::MatrixXd& normals) {
  const int d = static_cast<int>(normals.rows());
  const int n = static_cast<int>(normals.cols());
  if (n == 0) return 1.0;
  if (n < d) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(normals);
    return svd.singularValues().minCoeff();
  }
  // All d x d minors.
  double margin = std::numeric_limits<double>::infinity();
  std::vector<int> idx(d);
  for (int i = 0; i < d; ++i) idx[i] = i;
  Eigen::MatrixXd sub(d, d);
  while (true) {
    for (int i = 0; i < d; ++i) sub.col(i) = normals.col(idx[i]);
    margin = std::min(margin, std::abs(sub.determinant()));
    int pos = d - 1;
    while (pos >= 0 && idx[pos] == n - d + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int i = pos + 1; i < d; ++i) idx[i] = idx[i - 1] + 1;
  }
  return margin;
}

ArrangementPtr make_arrangement(Eigen::MatrixXd normals, Provenance provenance,
                                bool certify) {
  return std::make_shared<const Arrangement>(std::move(normals),
                                             std::move(provenance), certify);
}

ArrangementPtr arrangement_without(const ArrangementPtr& arr,
                                   const std::vector<int>& drop) {
  const int n = arr->size();
  std::vector<bool> dropped(n, false);
  for (int i : drop) dropped.at(i) = true;
  Eigen::MatrixXd kept(arr->dim(), n - static_cast<int>(drop.size()));
  int c = 0;
  for (int i = 0; i < n; ++i)
    if (!dropped[i]) kept.col(c++) = arr->normal(i);
  return make_arrangement(std::move(kept), arr->provenance(), /*certify=*/false);
}

std::vector<int> ConeRep::active() const {
  std::vector<int> out;
  for (int i = 0; i < signs.size(); ++i)
    if (signs(i) == 0) out.push_back(i);
  return out;
}

std::vector<std::pair<Eigen::VectorXi, Eigen::VectorXd>> enumerate_cells_core(
    const Eigen::MatrixXd& normals) {
  const int d = static_cast<int>(normals.rows());
  const int n = static_cast<int>(normals.cols());
  std::vector<std::pair<Eigen::VectorXi, Eigen::VectorXd>> cells;
  cells.emplace_back(Eigen::VectorXi(n), Eigen::VectorXd::Zero(d));

  for (int i = 0; i < n; ++i) {
    std::vector<std::pair<Eigen::VectorXi, Eigen::VectorXd>> next;
    next.reserve(cells.size() * 2);
    for (auto& [signs, witness] : cells) {
      double side = normals.col(i).dot(witness);
      int witness_sign = (side < 0) ? 1 : -1;
      bool witness_reliable = std::abs(side) > kWitnessMargin && i > 0;

      for (int cand : {1, -1}) {
        signs(i) = cand;
        if (witness_reliable && cand == witness_sign) {
          next.emplace_back(signs, witness);
          continue;
        }
        InteriorPoint ip = strict_interior(signed_rows(normals, signs, i + 1));
        if (ip.feasible) next.emplace_back(signs, ip.point);
      }
      signs(i) = 0;
    }
    cells = std::move(next);
  }
  return cells;
}

std::vector<ConeRep> enumerate_cells(const ArrangementPtr& arr) {
  auto raw = enumerate_cells_core(arr->normals());
  check_count(schlafli_count(arr->size(), arr->dim()), raw.size(), "cell count");
  std::vector<ConeRep> cells;
  cells.reserve(raw.size());
  for (auto& [signs, witness] : raw)
    cells.push_back(ConeRep{arr, signs, witness, arr->dim()});
  return cells;
}

std::vector<ConeRep> enumerate_k_faces(const ArrangementPtr& arr, int k) {
  const int d = arr->dim();
  const int n = arr->size();
  if (k < 1 || k > d)
    throw std::domain_error("enumerate_k_faces: k must lie in [1, d]");
  if (k == d) return enumerate_cells(arr);

  std::vector<ConeRep> faces;
  const int a = d - k;  // active hyperplanes per face
  if (n < a) {
    check_count(face_count_total(n, d, k), 0, "face count");
    return faces;
  }
  std::vector<int> idx(a);
  for (int i = 0; i < a; ++i) idx[i] = i;
  while (true) {
    Eigen::MatrixXd active_normals(d, a);
    for (int i = 0; i < a; ++i) active_normals.col(i) = arr->normal(idx[i]);
    Eigen::MatrixXd basis = nullspace_basis(active_normals);  // d x k

    std::vector<bool> is_active(n, false);
    for (int i : idx) is_active[i] = true;
    std::vector<int> inactive;
    for (int i = 0; i < n; ++i)
      if (!is_active[i]) inactive.push_back(i);

    Eigen::MatrixXd induced(k, inactive.size());
    for (size_t c = 0; c < inactive.size(); ++c) {
      Eigen::VectorXd v = basis.transpose() * arr->normal(inactive[c]);
      induced.col(c) = v / v.norm();
    }
    for (auto& [local_signs, local_witness] : enumerate_cells_core(induced)) {
      ConeRep face;
      face.arr = arr;
      face.signs = Eigen::VectorXi::Zero(n);
      for (size_t c = 0; c < inactive.size(); ++c)
        face.signs(inactive[c]) = local_signs(static_cast<int>(c));
      face.interior_point = basis * local_witness;
      face.span_dim = k;
      faces.push_back(std::move(face));
    }

    int pos = a - 1;
    while (pos >= 0 && idx[pos] == n - a + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int i = pos + 1; i < a; ++i) idx[i] = idx[i - 1] + 1;
  }
  check_count(face_count_total(n, d, k), faces.size(), "face count");
  return faces;
}

std::vector<ConeRep> faces_of_cell(const ConeRep& cell, int k) {
  if (!cell.is_cell()) throw std::domain_error("faces_of_cell: expects a cell");
  const auto& arr = cell.arr;
  const int d = arr->dim();
  const int n = arr->size();
  if (k < 1 || k > d)
    throw std::domain_error("faces_of_cell: k must lie in [1, d]");
  if (k == d) return {cell};

  std::vector<ConeRep> faces;
  const int a = d - k;
  if (n < a) return faces;
  std::vector<int> idx(a);
  for (int i = 0; i < a; ++i) idx[i] = i;
  while (true) {
    Eigen::MatrixXd active_normals(d, a);
    for (int i = 0; i < a; ++i) active_normals.col(i) = arr->normal(idx[i]);
    Eigen::MatrixXd basis = nullspace_basis(active_normals);

    std::vector<bool> is_active(n, false);
    for (int i : idx) is_active[i] = true;
    Eigen::MatrixXd rows(n - a, k);
    int r = 0;
    for (int i = 0; i < n; ++i) {
      if (is_active[i]) continue;
      Eigen::VectorXd v = basis.transpose() * arr->normal(i);
      rows.row(r++) = cell.signs(i) * v.transpose() / v.norm();
    }
    InteriorPoint ip = strict_interior(rows);
    if (ip.feasible) {
      ConeRep face;
      face.arr = arr;
      face.signs = cell.signs;
      for (int i : idx) face.signs(i) = 0;
      face.interior_point = basis * ip.point;
      face.span_dim = k;
      faces.push_back(std::move(face));
    }

    int pos = a - 1;
    while (pos >= 0 && idx[pos] == n - a + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int i = pos + 1; i < a; ++i) idx[i] = idx[i - 1] + 1;
  }
  return faces;
}

Eigen::MatrixXd dual_generators(const ConeRep& cell) {
  if (!cell.is_cell()) throw std::domain_error("dual_generators: expects a cell");
  Eigen::MatrixXd gens(cell.arr->dim(), cell.arr->size());
  for (int i = 0; i < cell.arr->size(); ++i)
    gens.col(i) = cell.signs(i) * cell.arr->normal(i);
  return gens;
}

SpanCone span_cone(const ConeRep& cone) {
  const auto& arr = cone.arr;
  const int d = arr->dim();
  std::vector<int> act = cone.active();
  SpanCone sc;
  if (act.empty()) {
    sc.span = Eigen::MatrixXd::Identity(d, d);
  } else {
    Eigen::MatrixXd active_normals(d, act.size());
    for (size_t i = 0; i < act.size(); ++i) active_normals.col(i) = arr->normal(act[i]);
    sc.span = nullspace_basis(active_normals);
  }
  const int m = static_cast<int>(sc.span.cols());
  int q = 0;
  for (int i = 0; i < cone.signs.size(); ++i)
    if (cone.signs(i) != 0) ++q;
  sc.rows.resize(q, m);
  int r = 0;
  for (int i = 0; i < cone.signs.size(); ++i) {
    if (cone.signs(i) == 0) continue;
    Eigen::VectorXd v = sc.span.transpose() * arr->normal(i);
    sc.rows.row(r++) = cone.signs(i) * v.transpose() / v.norm();
  }
  return sc;
}

SpanCone simplicial_cone(const Eigen::MatrixXd& generators) {
  const int k = static_cast<int>(generators.cols());
  SpanCone sc;
  if (k == 0) {
    sc.span.resize(generators.rows(), 0);
    sc.rows.resize(0, 0);
    return sc;
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(generators);
  sc.span = qr.householderQ() * Eigen::MatrixXd::Identity(generators.rows(), k);
  Eigen::MatrixXd m = sc.span.transpose() * generators;  // k x k, invertible
  Eigen::MatrixXd inv = m.inverse();
  // x = span z in pos{G} iff inv z >= 0 componentwise.
  sc.rows = -inv;
  for (int r = 0; r < k; ++r) sc.rows.row(r) /= sc.rows.row(r).norm();
  return sc;
}

Eigen::MatrixXd nullspace_basis(const Eigen::MatrixXd& columns) {
  const int d = static_cast<int>(columns.rows());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(columns, Eigen::ComputeFullU);
  double tol = 1e-10 * std::max(1.0, svd.singularValues().size() > 0
                                         ? svd.singularValues()(0)
                                         : 0.0);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > tol) ++rank;
  return svd.matrixU().rightCols(d - rank);
}

}  // namespace conetess
