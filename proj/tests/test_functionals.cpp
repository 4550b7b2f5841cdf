#include "conetess/functionals.hpp"

#include "conetess/combinatorics.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

using namespace conetess;

namespace {

ArrangementPtr random_arrangement(std::mt19937& gen, int d, int n) {
  return make_arrangement(testhelpers::random_normals(gen, d, n), {}, true);
}

ConeRep orthant_cell(int d) {
  Eigen::MatrixXd normals = -Eigen::MatrixXd::Identity(d, d);
  ConeRep cell;
  cell.arr = make_arrangement(normals, {}, true);
  cell.signs = Eigen::VectorXi::Ones(d);
  cell.interior_point = Eigen::VectorXd::Ones(d);
  cell.span_dim = d;
  return cell;
}

ConeRep halfspace_cell(int d) {
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(d, 1);
  u(0, 0) = 1;
  ConeRep cell;
  cell.arr = make_arrangement(u, {}, true);
  cell.signs = Eigen::VectorXi::Ones(1);
  cell.interior_point = -Eigen::VectorXd::Unit(d, 0);
  cell.span_dim = d;
  return cell;
}

}  // namespace

TEST_SUITE_BEGIN("functionals");

TEST_CASE("solid angles of reference cones") {
  RngStream rng(1, 0);
  // Halfspace within its span, any dimension: one half.
  for (int m : {1, 2, 3, 5}) {
    Eigen::MatrixXd row(1, m);
    row.setZero();
    row(0, 0) = 1;
    AngleEstimate a = solid_angle(row, m, 4000, rng);
    CHECK(a.value == doctest::Approx(0.5));
    CHECK(a.standard_error == 0);
  }
  // Whole span.
  CHECK(solid_angle(Eigen::MatrixXd(0, 3), 3, 100, rng).value == 1.0);
  // Orthants: 2^-m, exact through dimension 3, Monte Carlo above.
  for (int m = 2; m <= 5; ++m) {
    AngleEstimate a = solid_angle(-Eigen::MatrixXd::Identity(m, m), m, 200000, rng);
    double expect = std::pow(0.5, m);
    if (m <= 3) {
      CHECK(a.standard_error == 0);
      CHECK(a.value == doctest::Approx(expect));
    } else {
      CHECK(a.method == AngleMethod::monte_carlo);
      CHECK(std::abs(a.value - expect) < 4 * a.standard_error + 1e-12);
    }
  }
}

TEST_CASE("planar wedges and spherical lunes") {
  RngStream rng(2, 0);
  std::mt19937 gen(3);
  for (int trial = 0; trial < 20; ++trial) {
    double gap = 0.1 + 2.8 * (trial / 20.0);
    // Halfplanes with normals (0,1) and (-sin g, cos g) meet at the
    // interior angle pi - g.
    double opening = M_PI - gap;
    Eigen::MatrixXd rows(2, 2);
    rows << 0, 1, -std::sin(gap), std::cos(gap);
    AngleEstimate w = solid_angle(rows, 2, 100, rng);
    CHECK(w.value == doctest::Approx(opening / (2 * M_PI)));
    // The lune over the same dihedral in one more dimension doubles the
    // measure but keeps the fraction.
    Eigen::MatrixXd lune(2, 3);
    lune.setZero();
    lune.block(0, 0, 2, 2) = rows;
    AngleEstimate l = solid_angle(lune, 3, 100, rng);
    CHECK(l.standard_error == 0);
    CHECK(l.value == doctest::Approx(opening / (2 * M_PI)));
  }
  (void)gen;
}

TEST_CASE("exact spherical polygons agree with Monte Carlo") {
  RngStream rng(4, 0);
  std::mt19937 gen(5);
  for (int trial = 0; trial < 10; ++trial) {
    int q = 3 + trial % 3;
    Eigen::MatrixXd rows(q, 3);
    for (int i = 0; i < q; ++i)
      rows.row(i) = testhelpers::random_unit(gen, 3).transpose();
    if (!strict_interior(rows).feasible) continue;
    AngleEstimate exact = solid_angle(rows, 3, 100, rng);
    REQUIRE(exact.standard_error == 0);
    AngleEstimate mc = solid_angle(rows, 3, 400000, rng);
    // Force the Monte Carlo path by lifting to 4 dimensions with a
    // redundant axis constraint pair making rank 3.
    CHECK(std::abs(exact.value - mc.value) <=
          4 * mc.standard_error + (mc.standard_error == 0 ? 1e-12 : 0));
  }
}

TEST_CASE("Monte Carlo standard error shrinks like the square root") {
  RngStream rng(6, 0);
  Eigen::MatrixXd rows = -Eigen::MatrixXd::Identity(4, 4);
  AngleEstimate a1 = solid_angle(rows, 4, 50000, rng);
  AngleEstimate a2 = solid_angle(rows, 4, 200000, rng);
  CHECK(a2.standard_error < a1.standard_error * 0.7);
  CHECK(a2.standard_error > a1.standard_error * 0.3);
}

TEST_CASE("intrinsic volumes of reference cones") {
  RngStream rng(7, 0);
  // Halfspace in the plane: (0, 1/2, 1/2).
  auto v2 = intrinsic_volumes(halfspace_cell(2), 100, rng);
  REQUIRE(v2.size() == 3);
  CHECK(v2[0].value == doctest::Approx(0.0));
  CHECK(v2[1].value == doctest::Approx(0.5));
  CHECK(v2[2].value == doctest::Approx(0.5));
  // Orthants: V_m = binom(d, m) 2^-d.
  for (int d = 2; d <= 3; ++d) {
    auto v = intrinsic_volumes(orthant_cell(d), 100, rng);
    for (int m = 0; m <= d; ++m) {
      double expect = to_double(BigRational(binomial(d, m)) / BigRational(pow2(d)));
      CHECK(v[m].value == doctest::Approx(expect));
      CHECK(v[m].standard_error == 0);
    }
  }
}

TEST_CASE("intrinsic volumes sum to one on random cells") {
  RngStream rng(8, 0);
  std::mt19937 gen(9);
  for (int d = 2; d <= 3; ++d) {
    auto arr = random_arrangement(gen, d, 5);
    for (const auto& cell : enumerate_cells(arr)) {
      auto v = intrinsic_volumes(cell, 100, rng);
      double total = 0;
      for (const auto& a : v) total += a.value;
      CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
  // Dimension 4 runs partly through Monte Carlo.
  auto arr = random_arrangement(gen, 4, 5);
  auto cells = enumerate_cells(arr);
  auto v = intrinsic_volumes(cells[0], 40000, rng);
  double total = 0, var = 0;
  for (const auto& a : v) {
    total += a.value;
    var += a.standard_error * a.standard_error;
  }
  CHECK(std::abs(total - 1.0) < 4 * std::sqrt(var) + 1e-9);
}

TEST_CASE("face contents of reference cones") {
  RngStream rng(10, 0);
  // Planar wedge: Lambda_1 = 1, Lambda_2 = angle fraction.
  std::mt19937 gen(11);
  auto arr = random_arrangement(gen, 2, 4);
  for (const auto& cell : enumerate_cells(arr)) {
    auto lam = lambda_vector(cell, 100, rng);
    CHECK(lam[0].value == doctest::Approx(1.0));
    CHECK(lam[1].value == doctest::Approx(intrinsic_volume(cell, 2, 100, rng).value));
  }
  // Orthant of R^3: (3/2, 3/4, 1/8).
  auto lam = lambda_vector(orthant_cell(3), 100, rng);
  CHECK(lam[0].value == doctest::Approx(1.5));
  CHECK(lam[1].value == doctest::Approx(0.75));
  CHECK(lam[2].value == doctest::Approx(0.125));
}

TEST_CASE("total face content of a tessellation counts shared faces") {
  // Sum over cells of Lambda_k equals 2^{d-k} times the total k-content of
  // the tessellation's k-faces.
  RngStream rng(12, 0);
  std::mt19937 gen(13);
  for (int d = 2; d <= 3; ++d) {
    auto arr = random_arrangement(gen, d, 5);
    auto cells = enumerate_cells(arr);
    for (int k = 1; k <= d - 1; ++k) {
      double cell_total = 0;
      for (const auto& cell : cells) cell_total += lambda_vector(cell, 100, rng)[k - 1].value;
      double face_total = 0;
      for (const auto& face : enumerate_k_faces(arr, k))
        face_total += intrinsic_volume(face, k, 100, rng).value;
      CHECK(cell_total == doctest::Approx(std::pow(2.0, d - k) * face_total).epsilon(1e-9));
    }
  }
}

TEST_CASE("quermassintegrals") {
  RngStream rng(14, 0);
  std::mt19937 gen(15);
  auto arr = random_arrangement(gen, 3, 5);
  auto cells = enumerate_cells(arr);
  const auto& cell = cells[1];
  CHECK(quermass(cell, 0, 10, rng).value == 0.5);
  // Halfspace: U_{d-1} equals V_d equals one half.
  AngleEstimate u = quermass(halfspace_cell(3), 2, 20000, rng);
  CHECK(std::abs(u.value - 0.5) <= 4 * u.standard_error + 1e-12);
  // Crofton: U_j matches V_{j+1} + V_{j+3} + ... on random cells.
  for (int j = 0; j <= 2; ++j) {
    AngleEstimate mc = quermass(cell, j, 20000, rng);
    SpanCone sc = span_cone(cell);
    AngleEstimate exact = quermass_crofton_span(sc.rows, 3, j, 100, rng);
    CHECK(std::abs(mc.value - exact.value) <= 4 * mc.standard_error + 1e-12);
  }
  // The ambient subspace-hitting estimator is intrinsic: on a face it
  // reproduces the in-span value.
  auto faces = faces_of_cell(cell, 2);
  REQUIRE(!faces.empty());
  AngleEstimate ambient = quermass(faces[0], 1, 40000, rng);
  SpanCone fc = span_cone(faces[0]);
  AngleEstimate in_span = quermass_crofton_span(fc.rows, 2, 1, 100, rng);
  CHECK(std::abs(ambient.value - in_span.value) <= 4 * ambient.standard_error + 1e-12);
}

TEST_CASE("size functionals specialize to face counts and contents") {
  RngStream rng(16, 0);
  std::mt19937 gen(17);
  auto arr = random_arrangement(gen, 3, 6);
  auto cells = enumerate_cells(arr);
  for (const auto& cell : {cells[0], cells[5]}) {
    // Y_{k,0} = f_k / 2 for pointed cells.
    for (int k = 1; k <= 3; ++k) {
      AngleEstimate y = size_functional_Y(cell, k, 0, 100, rng);
      CHECK(y.value == doctest::Approx(0.5 * face_count(cell, k)));
    }
    // Y_{k,k-1} = Lambda_k.
    auto lam = lambda_vector(cell, 100, rng);
    for (int k = 1; k <= 3; ++k) {
      AngleEstimate y = size_functional_Y(cell, k, k - 1, 100, rng);
      CHECK(y.value == doctest::Approx(lam[k - 1].value).epsilon(1e-9));
    }
  }
}

TEST_CASE("generator cones mirror their dual cells") {
  RngStream rng(18, 0);
  std::mt19937 gen(19);
  auto arr = random_arrangement(gen, 3, 6);
  auto cells = enumerate_cells(arr);
  for (const auto& cell : {cells[2], cells[7]}) {
    GeneratorCone dual{dual_generators(cell)};
    // Conjugate faces pair k with d-k.
    for (int k = 0; k <= 3; ++k)
      CHECK(face_count(dual, k) == face_count(cell, 3 - k));
    // V_m(dual) = V_{d-m}(cell).
    for (int m = 0; m <= 3; ++m) {
      AngleEstimate vd = intrinsic_volume(dual, m, 100, rng);
      AngleEstimate vc = intrinsic_volume(cell, 3 - m, 100, rng);
      CHECK(vd.value == doctest::Approx(vc.value).epsilon(1e-9));
    }
    // Lambda_1 = f_1 / 2 on the generator side too.
    auto lam = lambda_vector(dual, 100, rng);
    CHECK(lam[0].value == doctest::Approx(0.5 * face_count(dual, 1)));
  }
  // Simplicial generator cone: the orthant.
  GeneratorCone orthant{Eigen::MatrixXd::Identity(3, 3)};
  CHECK(face_count(orthant, 1) == 3);
  CHECK(face_count(orthant, 2) == 3);
  CHECK(intrinsic_volume(orthant, 3, 100, rng).value == doctest::Approx(0.125));
}

TEST_SUITE_END();
