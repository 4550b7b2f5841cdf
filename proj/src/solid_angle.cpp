#include "conetess/solid_angle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <optional>

namespace conetess {

namespace {

constexpr double kRowDropTol = 1e-12;
constexpr double kFeasTol = 1e-9;
constexpr double kTightTol = 1e-8;

std::atomic<long> g_fallbacks{0};

void note_fallback(const char* why) {
  long count = g_fallbacks.fetch_add(1) + 1;
  if (count <= 10)
    std::cerr << "solid_angle: exact path degenerate (" << why
              << "), falling back to Monte Carlo\n";
}

bool contains(const Eigen::MatrixXd& rows, const Eigen::VectorXd& z, double tol) {
  return rows.rows() == 0 || (rows * z).maxCoeff() <= tol;
}

}  // namespace

// Binomial standard error sqrt(p(1-p)/N); an empty or full count would give
// zero, so those cases fall back to the Jeffreys midpoint (h+1/2)/(N+1),
// keeping 4-standard-error gates attainable on very thin cones.
double bernoulli_se(long hits, long samples) {
  double p = static_cast<double>(hits) / samples;
  if (hits == 0 || hits == samples) p = (hits + 0.5) / (samples + 1.0);
  return std::sqrt(p * (1 - p) / samples);
}

namespace {

AngleEstimate exact(double value, AngleMethod method) {
  return AngleEstimate{value, 0.0, method};
}

AngleEstimate monte_carlo(const Eigen::MatrixXd& rows, int m, int samples,
                          RngStream& rng) {
  samples = std::max(samples, 16);
  long hits = 0;
  for (int s = 0; s < samples; ++s)
    if (contains(rows, rng.unit_vector(m), 0.0)) ++hits;
  double p = static_cast<double>(hits) / samples;
  return AngleEstimate{p, bernoulli_se(hits, samples), AngleMethod::monte_carlo};
}

// Extreme directions of a pointed cone in dimension 2 or 3: candidates come
// from making m-1 constraints tight, kept if they satisfy the rest.
std::vector<Eigen::VectorXd> extreme_rays(const Eigen::MatrixXd& rows, int m) {
  std::vector<Eigen::VectorXd> rays;
  auto push_unique = [&](const Eigen::VectorXd& v) {
    for (const auto& r : rays)
      if (r.dot(v) > 1.0 - 1e-11) return;
    rays.push_back(v);
  };
  const int q = static_cast<int>(rows.rows());
  if (m == 2) {
    for (int i = 0; i < q; ++i) {
      Eigen::Vector2d a = rows.row(i);
      Eigen::Vector2d t(-a.y(), a.x());
      for (double s : {1.0, -1.0}) {
        Eigen::VectorXd cand = s * t;
        if (contains(rows, cand, kFeasTol)) push_unique(cand);
      }
    }
  } else {
    for (int i = 0; i < q; ++i) {
      for (int j = i + 1; j < q; ++j) {
        Eigen::Vector3d v = Eigen::Vector3d(rows.row(i)).cross(Eigen::Vector3d(rows.row(j)));
        double norm = v.norm();
        if (norm < kRowDropTol) continue;
        v /= norm;
        for (double s : {1.0, -1.0}) {
          Eigen::VectorXd cand = s * v;
          if (contains(rows, cand, kFeasTol)) push_unique(cand);
        }
      }
    }
  }
  return rays;
}

std::optional<double> wedge_fraction(const Eigen::MatrixXd& rows) {
  auto rays = extreme_rays(rows, 2);
  if (rays.size() != 2) return std::nullopt;
  double c = std::clamp(rays[0].dot(rays[1]), -1.0, 1.0);
  return std::acos(c) / (2 * M_PI);
}

// Spherical polygon area by Girard's theorem: order the extreme rays by
// walking the facet graph, sum the interior dihedral angles.
std::optional<double> girard_fraction(const Eigen::MatrixXd& rows) {
  auto rays = extreme_rays(rows, 3);
  const int v = static_cast<int>(rays.size());
  if (v < 3) return std::nullopt;

  const int q = static_cast<int>(rows.rows());
  // facet -> the rays it contains; a genuine facet holds exactly two.
  std::vector<std::vector<int>> on_facet(q);
  for (int r = 0; r < v; ++r)
    for (int c = 0; c < q; ++c)
      if (std::abs(rows.row(c).dot(rays[r])) < kTightTol) on_facet[c].push_back(r);

  std::vector<std::vector<int>> adjacent(v);
  for (int c = 0; c < q; ++c) {
    if (on_facet[c].size() != 2) continue;
    adjacent[on_facet[c][0]].push_back(on_facet[c][1]);
    adjacent[on_facet[c][1]].push_back(on_facet[c][0]);
  }
  for (int r = 0; r < v; ++r) {
    std::sort(adjacent[r].begin(), adjacent[r].end());
    adjacent[r].erase(std::unique(adjacent[r].begin(), adjacent[r].end()),
                      adjacent[r].end());
    if (adjacent[r].size() != 2) return std::nullopt;
  }

  // Walk the cycle.
  std::vector<int> order{0, adjacent[0][0]};
  while (true) {
    int cur = order.back(), prev = order[order.size() - 2];
    int next = (adjacent[cur][0] == prev) ? adjacent[cur][1] : adjacent[cur][0];
    if (next == order.front()) break;
    order.push_back(next);
    if (static_cast<int>(order.size()) > v) return std::nullopt;
  }
  if (static_cast<int>(order.size()) != v) return std::nullopt;

  double angle_sum = 0;
  for (int i = 0; i < v; ++i) {
    const Eigen::VectorXd& at = rays[order[i]];
    const Eigen::VectorXd& prev = rays[order[(i + v - 1) % v]];
    const Eigen::VectorXd& next = rays[order[(i + 1) % v]];
    Eigen::VectorXd t1 = prev - prev.dot(at) * at;
    Eigen::VectorXd t2 = next - next.dot(at) * at;
    double n1 = t1.norm(), n2 = t2.norm();
    if (n1 < kRowDropTol || n2 < kRowDropTol) return std::nullopt;
    angle_sum += std::acos(std::clamp(t1.dot(t2) / (n1 * n2), -1.0, 1.0));
  }
  double area = angle_sum - (v - 2) * M_PI;
  if (area < -1e-9 || area > 4 * M_PI + 1e-9) return std::nullopt;
  return std::clamp(area / (4 * M_PI), 0.0, 1.0);
}

}  // namespace

long solid_angle_fallback_count() { return g_fallbacks.load(); }

AngleEstimate solid_angle(const Eigen::MatrixXd& rows_in, int span_dim,
                          int mc_samples, RngStream& rng) {
  // Drop numerically zero rows.
  std::vector<int> keep;
  for (int i = 0; i < rows_in.rows(); ++i)
    if (rows_in.row(i).norm() > kRowDropTol) keep.push_back(i);
  Eigen::MatrixXd rows(keep.size(), span_dim);
  for (size_t i = 0; i < keep.size(); ++i)
    rows.row(i) = rows_in.row(keep[i]) / rows_in.row(keep[i]).norm();

  if (span_dim == 0 || rows.rows() == 0)
    return exact(1.0, AngleMethod::exact1d);  // the whole span

  // Split off the lineality space: the cone is (null rows) + its trace on
  // the row space, and the sphere fraction is invariant under that split.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows, Eigen::ComputeFullV);
  double smax = svd.singularValues()(0);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > 1e-10 * smax) ++rank;
  if (rank < span_dim) {
    Eigen::MatrixXd basis = svd.matrixV().leftCols(rank);
    return solid_angle(Eigen::MatrixXd(rows * basis), rank, mc_samples, rng);
  }

  // Pointed cone from here on.
  if (span_dim == 1) return exact(0.5, AngleMethod::exact1d);
  if (span_dim == 2) {
    if (auto f = wedge_fraction(rows)) return exact(*f, AngleMethod::exact2d);
    note_fallback("planar wedge rays");
    return monte_carlo(rows, span_dim, mc_samples, rng);
  }
  if (span_dim == 3) {
    if (auto f = girard_fraction(rows)) return exact(*f, AngleMethod::exact3d);
    note_fallback("spherical polygon walk");
    return monte_carlo(rows, span_dim, mc_samples, rng);
  }
  return monte_carlo(rows, span_dim, mc_samples, rng);
}

AngleEstimate solid_angle(const SpanCone& cone, int mc_samples, RngStream& rng) {
  return solid_angle(cone.rows, static_cast<int>(cone.span.cols()), mc_samples, rng);
}

}  // namespace conetess
