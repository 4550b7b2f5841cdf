#include "conetess/functionals.hpp"

#include <cmath>

namespace conetess {

namespace {

constexpr double kProjTol = 1e-11;

int rank_of(const Eigen::MatrixXd& rows) {
  if (rows.rows() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows);
  double smax = svd.singularValues()(0);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > 1e-10 * smax) ++rank;
  return rank;
}

// Project the rows not in `active` onto the span basis, dropping rows that
// are parallel to the span (they do not constrain within it).
Eigen::MatrixXd project_rows(const Eigen::MatrixXd& rows, const std::vector<bool>& active,
                             const Eigen::MatrixXd& basis) {
  const int r = static_cast<int>(basis.cols());
  Eigen::MatrixXd out(rows.rows(), r);
  int count = 0;
  for (int i = 0; i < rows.rows(); ++i) {
    if (active[i]) continue;
    Eigen::RowVectorXd p = rows.row(i) * basis;
    double norm = p.norm();
    if (norm < kProjTol) continue;
    out.row(count++) = p / norm;
  }
  return out.topRows(count);
}

// H-representation of the dual of a pointed full-dimensional H-cone: one row
// per extreme ray of the cone.
Eigen::MatrixXd dual_rows(const Eigen::MatrixXd& rows, int m) {
  if (m == 1) {
    // Pointed: all entries share a sign s; the cone is the ray of -s.
    double s = rows(0, 0) > 0 ? 1.0 : -1.0;
    Eigen::MatrixXd out(1, 1);
    out(0, 0) = -s;
    return out;
  }
  auto rays = span_faces(rows, m, 1);
  Eigen::MatrixXd out(rays.size(), m);
  for (size_t i = 0; i < rays.size(); ++i) {
    Eigen::VectorXd dir = rays[i].basis * rays[i].witness;
    out.row(i) = dir.transpose() / dir.norm();
  }
  return out;
}

}  // namespace

std::vector<SpanFace> span_faces(const Eigen::MatrixXd& rows, int m, int r) {
  std::vector<SpanFace> faces;
  if (r < 1 || r > m) throw std::domain_error("span_faces: r must lie in [1, m]");
  const int q = static_cast<int>(rows.rows());
  const int a = m - r;
  if (r == m) {
    InteriorPoint ip = strict_interior(rows);
    if (ip.feasible || q == 0)
      faces.push_back(SpanFace{{}, Eigen::MatrixXd::Identity(m, m), rows,
                               q == 0 ? Eigen::VectorXd::Zero(m) : ip.point});
    return faces;
  }
  if (q < a) return faces;

  std::vector<int> idx(a);
  for (int i = 0; i < a; ++i) idx[i] = i;
  while (true) {
    Eigen::MatrixXd tight(m, a);
    for (int i = 0; i < a; ++i) tight.col(i) = rows.row(idx[i]).transpose();
    Eigen::MatrixXd basis = nullspace_basis(tight);
    if (basis.cols() == r) {
      std::vector<bool> active(q, false);
      for (int i : idx) active[i] = true;
      Eigen::MatrixXd projected = project_rows(rows, active, basis);
      InteriorPoint ip = strict_interior(projected);
      if (ip.feasible) {
        faces.push_back(SpanFace{std::vector<int>(idx.begin(), idx.end()), basis,
                                 std::move(projected), ip.point});
      }
    }
    int pos = a - 1;
    while (pos >= 0 && idx[pos] == q - a + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int i = pos + 1; i < a; ++i) idx[i] = idx[i - 1] + 1;
  }
  return faces;
}

int span_face_count(const Eigen::MatrixXd& rows, int m, int r) {
  if (r == 0) return rank_of(rows) == m ? 1 : 0;
  return static_cast<int>(span_faces(rows, m, r).size());
}

AngleEstimate angle_sum(const std::vector<AngleEstimate>& parts) {
  AngleEstimate out;
  double var = 0;
  bool all_exact = true;
  AngleMethod method = AngleMethod::exact1d;
  for (const auto& p : parts) {
    out.value += p.value;
    var += p.standard_error * p.standard_error;
    if (!p.exact()) all_exact = false;
    if (static_cast<int>(p.method) > static_cast<int>(method)) method = p.method;
  }
  out.standard_error = std::sqrt(var);
  out.method = all_exact ? method : AngleMethod::monte_carlo;
  return out;
}

AngleEstimate angle_product(const AngleEstimate& a, const AngleEstimate& b) {
  AngleEstimate out;
  out.value = a.value * b.value;
  double v = a.value * a.value * b.standard_error * b.standard_error +
             b.value * b.value * a.standard_error * a.standard_error +
             a.standard_error * a.standard_error * b.standard_error * b.standard_error;
  out.standard_error = std::sqrt(v);
  out.method = (a.exact() && b.exact())
                   ? std::max(a.method, b.method)
                   : AngleMethod::monte_carlo;
  return out;
}

AngleEstimate intrinsic_volume_span(const Eigen::MatrixXd& rows, int m, int j,
                                    int mc_samples, RngStream& rng) {
  if (j < 0 || j > m)
    throw std::domain_error("intrinsic_volume_span: j must lie in [0, m]");
  if (m == 0) return AngleEstimate{j == 0 ? 1.0 : 0.0, 0.0, AngleMethod::exact1d};
  if (j == m) return solid_angle(rows, m, mc_samples, rng);
  if (j == 0) {
    if (rank_of(rows) < m) return AngleEstimate{0.0, 0.0, AngleMethod::exact1d};
    return solid_angle(dual_rows(rows, m), m, mc_samples, rng);
  }
  std::vector<AngleEstimate> parts;
  for (const auto& face : span_faces(rows, m, j)) {
    AngleEstimate internal = solid_angle(face.rows, j, mc_samples, rng);
    Eigen::MatrixXd normals(m, face.active_rows.size());
    for (size_t i = 0; i < face.active_rows.size(); ++i)
      normals.col(i) = rows.row(face.active_rows[i]).transpose();
    AngleEstimate external =
        solid_angle(simplicial_cone(normals), mc_samples, rng);
    parts.push_back(angle_product(internal, external));
  }
  return angle_sum(parts);
}

std::vector<AngleEstimate> intrinsic_volumes_span(const Eigen::MatrixXd& rows, int m,
                                                  int mc_samples, RngStream& rng) {
  std::vector<AngleEstimate> v(m + 1);
  for (int j = 0; j <= m; ++j)
    v[j] = intrinsic_volume_span(rows, m, j, mc_samples, rng);
  return v;
}

AngleEstimate quermass_crofton_span(const Eigen::MatrixXd& rows, int m, int j,
                                    int mc_samples, RngStream& rng) {
  std::vector<AngleEstimate> parts;
  for (int idx = j + 1; idx <= m; idx += 2)
    parts.push_back(intrinsic_volume_span(rows, m, idx, mc_samples, rng));
  return angle_sum(parts);
}

std::vector<AngleEstimate> lambda_vector_span(const Eigen::MatrixXd& rows, int m,
                                              int mc_samples, RngStream& rng) {
  std::vector<AngleEstimate> lambda(m);
  for (int r = 1; r <= m; ++r) {
    std::vector<AngleEstimate> parts;
    for (const auto& face : span_faces(rows, m, r))
      parts.push_back(solid_angle(face.rows, r, mc_samples, rng));
    lambda[r - 1] = angle_sum(parts);
  }
  return lambda;
}

std::vector<AngleEstimate> intrinsic_volumes(const ConeRep& cone, int mc_samples,
                                             RngStream& rng) {
  SpanCone sc = span_cone(cone);
  return intrinsic_volumes_span(sc.rows, static_cast<int>(sc.span.cols()),
                                mc_samples, rng);
}

std::vector<AngleEstimate> lambda_vector(const ConeRep& cone, int mc_samples,
                                         RngStream& rng) {
  SpanCone sc = span_cone(cone);
  return lambda_vector_span(sc.rows, static_cast<int>(sc.span.cols()), mc_samples,
                            rng);
}

AngleEstimate intrinsic_volume(const ConeRep& cone, int j, int mc_samples,
                               RngStream& rng) {
  SpanCone sc = span_cone(cone);
  return intrinsic_volume_span(sc.rows, static_cast<int>(sc.span.cols()), j,
                               mc_samples, rng);
}

int face_count(const ConeRep& cone, int k) {
  SpanCone sc = span_cone(cone);
  return span_face_count(sc.rows, static_cast<int>(sc.span.cols()), k);
}

AngleEstimate quermass(const ConeRep& cone, int j, int mc_samples, RngStream& rng) {
  const int d = cone.arr->dim();
  if (j < 0 || j > d - 1)
    throw std::domain_error("quermass: j must lie in [0, d-1]");
  bool subspace = true;
  for (int i = 0; i < cone.signs.size(); ++i)
    if (cone.signs(i) != 0) subspace = false;
  if (subspace)
    throw std::domain_error("quermass: cone is a linear subspace; use the exact "
                            "subspace rules instead");
  if (j == 0)
    return AngleEstimate{0.5, 0.0, AngleMethod::exact1d};

  std::vector<int> act = cone.active();
  Eigen::MatrixXd active_normals(d, act.size());
  for (size_t i = 0; i < act.size(); ++i) active_normals.col(i) = cone.arr->normal(act[i]);

  long hits = 0;
  const int samples = std::max(mc_samples, 16);
  for (int s = 0; s < samples; ++s) {
    Eigen::MatrixXd frame = rng.orthonormal_frame(d, d - j);
    // Work inside the subspace; equality constraints from the active set
    // reduce it further.
    Eigen::MatrixXd basis = frame;
    if (!act.empty()) {
      Eigen::MatrixXd eq = active_normals.transpose() * frame;  // a x (d-j)
      Eigen::MatrixXd null_in = nullspace_basis(eq.transpose());
      if (null_in.cols() == 0) continue;
      basis = frame * null_in;
    }
    int vars = static_cast<int>(basis.cols());
    Eigen::MatrixXd rows(cone.signs.size() - act.size(), vars);
    int r = 0;
    for (int i = 0; i < cone.signs.size(); ++i) {
      if (cone.signs(i) == 0) continue;
      rows.row(r++) = cone.signs(i) * (cone.arr->normal(i).transpose() * basis);
    }
    if (cone_has_nonzero_point(rows, rng.unit_vector(vars))) ++hits;
  }
  double p = static_cast<double>(hits) / samples;
  return AngleEstimate{p / 2.0, bernoulli_se(hits, samples) / 2.0,
                       AngleMethod::monte_carlo};
}

AngleEstimate size_functional_Y(const ConeRep& cone, int k, int j, int mc_samples,
                                RngStream& rng) {
  SpanCone sc = span_cone(cone);
  const int m = static_cast<int>(sc.span.cols());
  if (k < 1 || k > m) throw std::domain_error("size_functional_Y: k out of range");
  if (j < 0 || j >= k) throw std::domain_error("size_functional_Y: j must lie in [0, k-1]");
  std::vector<AngleEstimate> parts;
  for (const auto& face : span_faces(sc.rows, m, k))
    parts.push_back(quermass_crofton_span(face.rows, k, j, mc_samples, rng));
  return angle_sum(parts);
}

int face_count(const GeneratorCone& cone, int k) {
  const int d = cone.dim();
  if (k < 0 || k > d) throw std::domain_error("face_count: k out of range");
  Eigen::MatrixXd rows = cone.generators.transpose();
  if (k == d) return rank_of(rows) == d ? 1 : 0;  // conjugate of the dual's apex
  return span_face_count(rows, d, d - k);
}

AngleEstimate intrinsic_volume(const GeneratorCone& cone, int m, int mc_samples,
                               RngStream& rng) {
  const int d = cone.dim();
  if (m < 0 || m > d) throw std::domain_error("intrinsic_volume: m out of range");
  Eigen::MatrixXd rows = cone.generators.transpose();
  if (m == 0) return intrinsic_volume_span(rows, d, d, mc_samples, rng);
  if (m == d) {
    // Facets of the cone are the rays of its dual.
    if (rank_of(rows) < d) return AngleEstimate{0.0, 0.0, AngleMethod::exact1d};
    return solid_angle(dual_rows(rows, d), d, mc_samples, rng);
  }
  // m-faces of pos{X} pair with the (d-m)-faces G of the dual H-cone:
  // the face itself is pos{X_a : a tight on G}, its external angle is the
  // solid angle of G in G's span.
  std::vector<AngleEstimate> parts;
  for (const auto& g : span_faces(rows, d, d - m)) {
    Eigen::MatrixXd gens(d, g.active_rows.size());
    for (size_t i = 0; i < g.active_rows.size(); ++i)
      gens.col(i) = cone.generators.col(g.active_rows[i]);
    AngleEstimate internal = solid_angle(simplicial_cone(gens), mc_samples, rng);
    AngleEstimate external = solid_angle(g.rows, d - m, mc_samples, rng);
    parts.push_back(angle_product(internal, external));
  }
  return angle_sum(parts);
}

std::vector<AngleEstimate> lambda_vector(const GeneratorCone& cone, int mc_samples,
                                         RngStream& rng) {
  const int d = cone.dim();
  Eigen::MatrixXd rows = cone.generators.transpose();
  std::vector<AngleEstimate> lambda(d);
  for (int m = 1; m < d; ++m) {
    std::vector<AngleEstimate> parts;
    for (const auto& g : span_faces(rows, d, d - m)) {
      Eigen::MatrixXd gens(d, g.active_rows.size());
      for (size_t i = 0; i < g.active_rows.size(); ++i)
        gens.col(i) = cone.generators.col(g.active_rows[i]);
      parts.push_back(solid_angle(simplicial_cone(gens), mc_samples, rng));
    }
    lambda[m - 1] = angle_sum(parts);
  }
  lambda[d - 1] = intrinsic_volume(cone, d, mc_samples, rng);
  return lambda;
}

AngleEstimate quermass(const GeneratorCone& cone, int j, int mc_samples,
                       RngStream& rng) {
  const int d = cone.dim();
  if (j < 0 || j > d - 1) throw std::domain_error("quermass: j out of range");
  if (j == 0) return AngleEstimate{0.5, 0.0, AngleMethod::exact1d};
  const int n = static_cast<int>(cone.generators.cols());
  long hits = 0;
  const int samples = std::max(mc_samples, 16);
  for (int s = 0; s < samples; ++s) {
    Eigen::MatrixXd frame = rng.orthonormal_frame(d, d - j);
    // pos{X} meets span(frame) nontrivially iff some X c = frame z with
    // c >= 0 and z != 0 (normalized by a generic functional, either sign).
    const int kz = d - j;
    Eigen::MatrixXd a_eq(d + 1, n + 2 * kz);
    Eigen::VectorXd b_eq = Eigen::VectorXd::Zero(d + 1);
    a_eq.setZero();
    a_eq.block(0, 0, d, n) = cone.generators;
    a_eq.block(0, n, d, kz) = -frame;
    a_eq.block(0, n + kz, d, kz) = frame;
    Eigen::VectorXd probe = rng.unit_vector(kz);
    a_eq.block(d, n, 1, kz) = probe.transpose();
    a_eq.block(d, n + kz, 1, kz) = -probe.transpose();
    bool hit = false;
    for (double sgn : {1.0, -1.0}) {
      b_eq(d) = sgn;
      if (lp_feasible(Eigen::MatrixXd(0, n + 2 * kz), Eigen::VectorXd(0), a_eq, b_eq)) {
        hit = true;
        break;
      }
    }
    if (hit) ++hits;
  }
  double p = static_cast<double>(hits) / samples;
  return AngleEstimate{p / 2.0, bernoulli_se(hits, samples) / 2.0,
                       AngleMethod::monte_carlo};
}

}  // namespace conetess
