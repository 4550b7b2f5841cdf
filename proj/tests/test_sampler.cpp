#include "conetess/sampler.hpp"

#include "conetess/combinatorics.hpp"
#include "conetess/moments.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

#include <map>

using namespace conetess;

TEST_SUITE_BEGIN("sampler");

TEST_CASE("streams are reproducible and distinct") {
  DirectionDistribution iso;
  RngStream a(99, 7), b(99, 7), c(99, 8);
  auto arr_a = sample_arrangement(6, 3, iso, a);
  auto arr_b = sample_arrangement(6, 3, iso, b);
  auto arr_c = sample_arrangement(6, 3, iso, c);
  CHECK(arr_a->normals() == arr_b->normals());  // bitwise
  CHECK(arr_a->normals() != arr_c->normals());
  CHECK(arr_a->certificate());
  CHECK(arr_a->provenance().master_seed == 99);
  CHECK(arr_a->provenance().stream_index == 7);
}

TEST_CASE("anisotropic law with unit scales reproduces the isotropic one") {
  // E|x_1| over the circle is 2/pi; both samplers must match it.
  RngStream rng(101, 0);
  DirectionDistribution iso;
  DirectionDistribution aniso = DirectionDistribution::anisotropic(Eigen::Vector2d(1, 1));
  const int trials = 40000;
  double sum_iso = 0, sum_aniso = 0;
  for (int t = 0; t < trials; ++t) {
    sum_iso += std::abs(iso.sample(2, rng)(0));
    sum_aniso += std::abs(aniso.sample(2, rng)(0));
  }
  double se = std::sqrt(0.1 / trials);  // Var|x_1| < 0.1 on the circle
  CHECK(std::abs(sum_iso / trials - 2 / M_PI) < 4 * se);
  CHECK(std::abs(sum_aniso / trials - 2 / M_PI) < 4 * se);
}

TEST_CASE("uniform cell choice: frequencies on a fixed arrangement") {
  RngStream rng(103, 0);
  DirectionDistribution iso;
  auto arr = sample_arrangement(3, 2, iso, rng);
  const int draws = 60000;
  std::map<std::string, int> freq;
  for (int t = 0; t < draws; ++t) {
    ConeRep cell = sample_schlafli(arr, rng);
    std::string key;
    for (int i = 0; i < cell.signs.size(); ++i) key += cell.signs(i) > 0 ? '+' : '-';
    ++freq[key];
  }
  REQUIRE(freq.size() == 6);
  double p = 1.0 / 6, se = std::sqrt(p * (1 - p) / draws);
  for (const auto& [key, count] : freq)
    CHECK(std::abs(static_cast<double>(count) / draws - p) < 4 * se);
}

TEST_CASE("the cone of a fixed direction") {
  RngStream rng(105, 0);
  DirectionDistribution iso;
  auto arr = sample_arrangement(5, 3, iso, rng);
  Eigen::VectorXd e = Eigen::VectorXd::Unit(3, 0);
  auto cell = sample_e_cone(arr, e);
  REQUIRE(cell.has_value());
  for (int i = 0; i < 5; ++i) CHECK(cell->signs(i) * arr->normal(i).dot(e) < 0);
  // It is one of the enumerated cells.
  bool found = false;
  for (const auto& c : enumerate_cells(arr))
    if (c.signs == cell->signs) found = true;
  CHECK(found);
  // The empty tessellation gives the whole space.
  auto whole = sample_e_cone(make_arrangement(Eigen::MatrixXd(3, 0), {}, true), e);
  REQUIRE(whole.has_value());
  CHECK(whole->span_dim == 3);
}

TEST_CASE("rejection sampling of spanned cones") {
  RngStream rng(107, 0);
  DirectionDistribution iso;
  // n <= d: always accepted, simplicial, d facets at n = d.
  for (int t = 0; t < 10; ++t) {
    GeneratorCone cone = sample_cover_efron_direct(3, 3, iso, rng);
    CHECK(face_count(cone, 2) == 3);
  }
  // Acceptance rate at (n, d) = (4, 2) is the non-spanning probability 1/2.
  long long rejections = 0;
  const int accepts = 20000;
  for (int t = 0; t < accepts; ++t)
    sample_cover_efron_direct(4, 2, iso, rng, &rejections);
  double rate = static_cast<double>(accepts) / (accepts + rejections);
  double p = to_double(wendel_probability(4, 2));
  CHECK(std::abs(rate - p) < 4 * std::sqrt(p * (1 - p) / (accepts + rejections)));
}

TEST_CASE("both spanned-cone routes match the closed-form volume expectation") {
  RngStream rng(109, 0);
  DirectionDistribution iso;
  const int trials = 20000;
  // In the plane the facet count of a pointed spanned cone is constant, so
  // the volume is the informative functional here.
  double exact = expected_V_cover_efron(4, 2, 2).to_double();
  double direct = 0, dual = 0, direct_sq = 0, dual_sq = 0;
  for (int t = 0; t < trials; ++t) {
    double vd = intrinsic_volume(sample_cover_efron_direct(4, 2, iso, rng), 2, 100, rng).value;
    auto arr = sample_arrangement(4, 2, iso, rng);
    double vl = intrinsic_volume(sample_cover_efron_dual(arr, rng), 2, 100, rng).value;
    direct += vd;
    dual += vl;
    direct_sq += vd * vd;
    dual_sq += vl * vl;
  }
  direct /= trials;
  dual /= trials;
  double se_d = std::sqrt((direct_sq / trials - direct * direct) / trials);
  double se_l = std::sqrt((dual_sq / trials - dual * dual) / trials);
  CHECK(std::abs(direct - exact) < 4 * se_d);
  CHECK(std::abs(dual - exact) < 4 * se_l);
  // The planar facet counts are exactly two on both routes.
  CHECK(face_count(sample_cover_efron_direct(4, 2, iso, rng), 1) == 2);
}

TEST_CASE("two-route distributional agreement of the volume") {
  RngStream rng(111, 0);
  DirectionDistribution iso;
  const int m = 5000;
  std::vector<double> va, vb;
  for (int t = 0; t < m; ++t) {
    GeneratorCone direct = sample_cover_efron_direct(4, 2, iso, rng);
    va.push_back(intrinsic_volume(direct, 2, 100, rng).value);
    auto arr = sample_arrangement(4, 2, iso, rng);
    GeneratorCone dual = sample_cover_efron_dual(arr, rng);
    vb.push_back(intrinsic_volume(dual, 2, 100, rng).value);
  }
  double d = testhelpers::ks_statistic(va, vb);
  CHECK(d < testhelpers::ks_critical(1e-3, m, m));
}

TEST_CASE("weighted cone at k = j = d reproduces the uniform cell") {
  RngStream rng(113, 0);
  DirectionDistribution iso;
  const int trials = 20000;
  double sum = 0, sq = 0;
  for (int t = 0; t < trials; ++t) {
    ConeRep cone = sample_weighted_Ckj(4, 2, 2, 2, iso, rng);
    double v = intrinsic_volume(cone, 2, 100, rng).value;
    sum += v;
    sq += v * v;
  }
  double mean = sum / trials;
  double se = std::sqrt((sq / trials - mean * mean) / trials);
  CHECK(std::abs(mean - expected_V_schlafli(4, 2, 2).to_double()) < 4 * se);
}

TEST_CASE("weighted cone at k = j = 1 reproduces the fixed-direction cone") {
  RngStream rng(115, 0);
  DirectionDistribution iso;
  const int trials = 20000;
  double sum = 0, sq = 0;
  for (int t = 0; t < trials; ++t) {
    ConeRep cone = sample_weighted_Ckj(3, 2, 1, 1, iso, rng);
    double v = intrinsic_volume(cone, 2, 100, rng).value;
    sum += v;
    sq += v * v;
  }
  double mean = sum / trials;
  double se = std::sqrt((sq / trials - mean * mean) / trials);
  CHECK(std::abs(mean - theta(3, 2).to_double()) < 4 * se);
}

TEST_CASE("second selection procedure") {
  RngStream rng(117, 0);
  // n = d - k: the whole space, almost surely.
  ConeRep whole = sample_weighted_Dkj(1, 3, 2, 2, rng);
  CHECK(whole.span_dim == 3);
  CHECK(whole.signs.size() == 0);
  // The reduced arrangement keeps n - d + k hyperplanes.
  ConeRep cone = sample_weighted_Dkj(6, 3, 2, 1, rng);
  CHECK(cone.signs.size() == 5);
  CHECK(cone.is_cell());
  CHECK_THROWS_AS(sample_weighted_Dkj(1, 3, 2, 1, rng), ConfigError);
}

TEST_CASE("volume-weighting of the fixed-direction cone") {
  // For rotation-invariant f, E f(zero cell) = C(n,d) E (f V_d)(uniform cell).
  RngStream rng(119, 0);
  DirectionDistribution iso;
  const int trials = 20000;
  Eigen::VectorXd e = Eigen::VectorXd::Unit(2, 0);
  double lhs_sum = 0, lhs_sq = 0, rhs_sum = 0, rhs_sq = 0;
  for (int t = 0; t < trials; ++t) {
    auto arr = sample_arrangement(3, 2, iso, rng);
    auto zero_cell = sample_e_cone(arr, e);
    if (!zero_cell) continue;
    double f = face_count(*zero_cell, 1);
    lhs_sum += f;
    lhs_sq += f * f;
    auto arr2 = sample_arrangement(3, 2, iso, rng);
    ConeRep cell = sample_schlafli(arr2, rng);
    double g = face_count(cell, 1) * intrinsic_volume(cell, 2, 100, rng).value;
    rhs_sum += g;
    rhs_sq += g * g;
  }
  double c = to_double(schlafli_count(3, 2));
  double lhs = lhs_sum / trials, rhs = c * rhs_sum / trials;
  double se = std::sqrt((lhs_sq / trials - lhs * lhs) / trials +
                        c * c * (rhs_sq / trials - std::pow(rhs_sum / trials, 2)) / trials);
  CHECK(std::abs(lhs - rhs) < 4 * se);
}

TEST_SUITE_END();
