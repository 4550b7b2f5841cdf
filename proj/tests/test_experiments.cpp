#include "conetess/experiments.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace conetess;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.d = 2;
  cfg.n = 3;
  cfg.model = ConeModel::schlafli;
  cfg.replicates = 400;
  cfg.inner_mc_samples = 16;
  cfg.master_seed = 2718;
  cfg.functionals = {"f_1", "V_2", "Lambda_1"};
  return cfg;
}

}  // namespace

TEST_SUITE_BEGIN("experiments");

TEST_CASE("small gated runs pass") {
  ExperimentReport rep = run(small_config());
  REQUIRE(rep.results.size() == 3);
  CHECK(rep.all_pass());
  CHECK(rep.hard_assertion_failures == 0);
  for (const auto& r : rep.results) CHECK(std::abs(r.z) < 4);
}

TEST_CASE("a degenerate functional is exact in every replicate") {
  // One line in the plane: both halfplanes carry unit 1-content, so the
  // squared content is exactly one with zero spread.
  ExperimentConfig cfg;
  cfg.d = 2;
  cfg.n = 1;
  cfg.replicates = 200;
  cfg.master_seed = 5;
  cfg.functionals = {"Lambda_1*Lambda_1"};
  ExperimentReport rep = run(cfg);
  REQUIRE(rep.results.size() == 1);
  CHECK(rep.results[0].estimate == 1.0);
  CHECK(rep.results[0].se == 0.0);
  CHECK(rep.results[0].pass);
}

TEST_CASE("reports are bit-reproducible across worker counts") {
  ExperimentConfig cfg = small_config();
  cfg.workers = 1;
  std::string one = to_canonical_json(run(cfg));
  cfg.workers = 2;
  std::string two = to_canonical_json(run(cfg));
  cfg.workers = 8;
  std::string eight = to_canonical_json(run(cfg));
  CHECK(one == two);
  CHECK(one == eight);
}

TEST_CASE("report round trip and CSV export") {
  ExperimentReport rep = run(small_config());
  const std::string dir = "/tmp/conetess_test_reports";
  std::filesystem::create_directories(dir);
  write_report(rep, dir + "/r.json");
  ExperimentReport back = read_report(dir + "/r.json");
  CHECK(to_canonical_json(rep) == to_canonical_json(back));
  CHECK(back.config.functionals == rep.config.functionals);
  CHECK(back.results.size() == rep.results.size());

  write_csv(rep, dir + "/r.csv");
  std::ifstream csv(dir + "/r.csv");
  std::string line;
  int lines = 0;
  std::getline(csv, line);
  CHECK(line == "name,estimate,se,exact,exact_err,z,pass");
  while (std::getline(csv, line))
    if (!line.empty()) ++lines;
  CHECK(lines == static_cast<int>(rep.results.size()));
}

TEST_CASE("schema version is checked on read") {
  const std::string path = "/tmp/conetess_test_reports/bad_schema.json";
  std::filesystem::create_directories("/tmp/conetess_test_reports");
  std::ofstream f(path);
  f << "{\"schema_version\": 99, \"config\": {}, \"results\": []}";
  f.close();
  CHECK_THROWS(read_report(path));
}

TEST_CASE("config validation") {
  ExperimentConfig cfg = small_config();
  cfg.replicates = 10;
  CHECK_THROWS_AS(run(cfg), ConfigError);
  cfg = small_config();
  cfg.functionals = {"nonsense_9"};
  CHECK_THROWS_AS(run(cfg), ConfigError);
  cfg = small_config();
  cfg.model = ConeModel::ckj;
  cfg.k = 0;
  CHECK_THROWS_AS(run(cfg), ConfigError);
  cfg = small_config();
  cfg.distribution = DirectionDistribution::anisotropic(Eigen::Vector2d(1, 2));
  cfg.functionals = {"Lambda_1*Lambda_2"};
  CHECK_THROWS_AS(run(cfg), ConfigError);
}

TEST_CASE("exact values resolve per model") {
  ExperimentConfig cfg = small_config();
  cfg.model = ConeModel::e_cone;
  cfg.functionals = {"V_2", "Lambda_1"};
  ExperimentReport rep = run(cfg);
  CHECK(rep.all_pass());
  cfg.model = ConeModel::cover_efron_dual;
  cfg.n = 4;
  cfg.functionals = {"f_1", "Lambda_1", "f_1^2", "U_1", "V_1"};
  rep = run(cfg);
  CHECK(rep.all_pass());
}

TEST_CASE("weighted models gate against the reweighting identity") {
  ExperimentConfig cfg;
  cfg.d = 2;
  cfg.n = 4;
  cfg.model = ConeModel::ckj;
  cfg.k = 2;
  cfg.j = 1;
  cfg.replicates = 4000;
  cfg.master_seed = 31415;
  cfg.functionals = {"1", "f_1", "V_2"};
  ExperimentReport rep = run(cfg);
  CHECK(rep.all_pass());
  cfg.model = ConeModel::dkj;
  rep = run(cfg);
  CHECK(rep.all_pass());
}

TEST_CASE("covariance experiment gates on a small planar case") {
  ExperimentReport rep = covariance_experiment(2, 4, 4000, 11);
  CHECK(rep.all_pass());
  bool found = false;
  for (const auto& r : rep.results)
    if (r.name.rfind("Cov(", 0) == 0) found = true;
  CHECK(found);
}

TEST_CASE("jackknife standard errors shrink with the replicate count") {
  ExperimentReport small = covariance_experiment(2, 4, 800, 17);
  ExperimentReport large = covariance_experiment(2, 4, 3200, 17);
  double se_small = 0, se_large = 0;
  for (const auto& r : small.results)
    if (r.name == "Cov(Lambda_2,Lambda_2)") se_small = r.se;
  for (const auto& r : large.results)
    if (r.name == "Cov(Lambda_2,Lambda_2)") se_large = r.se;
  REQUIRE(se_small > 0);
  double ratio = se_small / se_large;
  CHECK(ratio > 1.4);
  CHECK(ratio < 2.9);
}

TEST_CASE("identity suite passes on planar and spatial cases") {
  ExperimentReport rep2 = identity_suite(2, 4, 2, 23);
  CHECK(rep2.all_pass());
  ExperimentReport rep3 = identity_suite(3, 5, 2, 29);
  CHECK(rep3.all_pass());
}

TEST_CASE("count mismatches abort as hard assertions") {
  // Two nearly parallel lines defeat the split detection; the enumeration's
  // count check must throw rather than return a wrong tessellation.
  double eps = 1e-12;
  Eigen::MatrixXd bad(2, 2);
  bad << 1, std::cos(eps), 0, std::sin(eps);
  bad.col(1) /= bad.col(1).norm();
  auto arr = make_arrangement(bad, {}, false);
  CHECK_THROWS_AS(enumerate_cells(arr), GeneralPositionError);
}

TEST_SUITE_END();
