// Acceptance suite: one pass/fail line per criterion, full stated budgets.
// Exit code is the number of failed criteria.

#include "conetess/experiments.hpp"
#include "conetess/identities.hpp"
#include "conetess/moments.hpp"

#include "test_helpers.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

using namespace conetess;

namespace {

struct Criterion {
  std::string name;
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    pass = false;
    if (!detail.empty()) detail += "; ";
    detail += why;
  }
};

int g_failures = 0;

void report(const Criterion& c, double seconds) {
  std::printf("[%s] %s (%.1f s)%s%s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
              seconds, c.detail.empty() ? "" : ": ", c.detail.c_str());
  std::fflush(stdout);
  if (!c.pass) ++g_failures;
}

template <class Fn>
void criterion(const std::string& name, Fn&& body) {
  Criterion c;
  c.name = name;
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.fail(std::string("exception: ") + e.what());
  }
  double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(c, secs);
}

void check_gates(Criterion& c, const ExperimentReport& rep, const std::string& tag) {
  if (rep.hard_assertion_failures > 0) c.fail(tag + ": hard assertion failures");
  for (const auto& r : rep.results)
    if (!r.pass)
      c.fail(tag + ": " + r.name + " z=" + std::to_string(r.z));
}

bool quick = false;
long long budget(long long full) { return quick ? std::max(200ll, full / 100) : full; }

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--quick") == 0) quick = true;

  // 1. Exact-layer identities.
  criterion("1 exact-layer identities", [](Criterion& c) {
    for (int d = 1; d <= 8; ++d)
      for (long long n = 0; n <= 20; ++n) {
        BigRational total(0);
        for (int j = 0; j <= d; ++j) total += *expected_V_schlafli(n, d, j).rational;
        if (total != 1) c.fail("sum of E V_j != 1 at d=" + std::to_string(d) +
                               " n=" + std::to_string(n));
      }
    for (int d = 1; d <= 6; ++d)
      for (long long n = 0; n <= 15; ++n)
        for (int s = 1; s <= d; ++s)
          for (int r = 1; r <= d; ++r) {
            PreciseReal sym = second_moment_lambda(n, d, s, r).to_precise();
            PreciseReal asym = second_moment_lambda_asym(n, d, s, r).to_precise();
            if (!sym.agrees_with(asym, 1e-25))
              c.fail("second-moment forms disagree at (" + std::to_string(n) + "," +
                     std::to_string(d) + "," + std::to_string(s) + "," +
                     std::to_string(r) + ")");
          }
    for (int d = 2; d <= 6; ++d)
      for (long long n = 0; n <= 15; ++n)
        for (int k = 0; k <= d - 1; ++k)
          if (!second_moment_lambda(n, d, d - k, d)
                   .to_precise()
                   .agrees_with(mixed_lambda_Vd(n, d, k).to_precise(), 1e-25))
            c.fail("mixed-moment specialization fails at d=" + std::to_string(d));
    for (int d = 2; d <= 6; ++d)
      for (long long n = 0; n <= 15; ++n) {
        for (int k = 1; k <= d - 1; ++k)
          if (*expected_U_cover_efron(n, d, k).rational !=
              BigRational(1, 2) - *expected_U_schlafli(n, d, d - k).rational)
            c.fail("quermassintegral duality chain fails");
        for (int j = 0; j <= d; ++j)
          if (*expected_V_cover_efron(n, d, j).rational !=
              *expected_V_schlafli(n, d, d - j).rational)
            c.fail("intrinsic-volume duality chain fails");
      }
  });

  // 2. Degenerate-case ladder.
  criterion("2 degenerate-case ladder", [](Criterion& c) {
    for (int d = 1; d <= 6; ++d)
      for (int s = 1; s <= d; ++s)
        for (int r = 1; r <= d; ++r) {
          long long n = d - s;
          if (!second_moment_lambda(n, d, s, r)
                   .to_precise()
                   .agrees_with(expected_lambda_schlafli(n, d, r).to_precise(), 1e-25))
            c.fail("ladder fails at d=" + std::to_string(d) + " s=" + std::to_string(s) +
                   " r=" + std::to_string(r));
        }
    if (!second_moment_lambda(1, 2, 1, 1).to_precise().agrees_with(PreciseReal(1), 1e-25))
      c.fail("planar desk case n=1");
    if (!second_moment_lambda(2, 2, 1, 1).to_precise().agrees_with(PreciseReal(1), 1e-25))
      c.fail("planar desk case n=2");
  });

  // 3. Hard combinatorial assertions.
  criterion("3 hard combinatorial assertions", [](Criterion& c) {
    struct Case {
      int d;
      long long n;
    };
    for (Case cs : {Case{2, 6}, Case{3, 6}, Case{4, 7}}) {
      const long long arrangements = budget(1000);
      std::atomic<long long> bad{0};
      DirectionDistribution iso;
      std::vector<std::string> errors;
      std::mutex mu;
      auto body = [&](long long a) {
        RngStream rng(7700 + cs.d, static_cast<std::uint64_t>(a));
        auto arr = sample_arrangement(cs.n, cs.d, iso, rng);
        auto cells = enumerate_cells(arr);  // throws on a count miss
        for (int k = 1; k <= cs.d - 1; ++k) {
          auto faces = enumerate_k_faces(arr, k);  // throws on a count miss
          long long expect = 1ll << (cs.d - k);
          for (const auto& face : faces) {
            long long hits = 0;
            for (const auto& cell : cells) {
              bool match = true;
              for (int i = 0; i < face.signs.size() && match; ++i)
                if (face.signs(i) != 0 && face.signs(i) != cell.signs(i)) match = false;
              if (match) ++hits;
            }
            if (hits != expect) throw GeneralPositionError("incidence != 2^(d-k)");
          }
        }
      };
      try {
        const int workers = worker_count(0);
        std::atomic<long long> next{0};
        std::vector<std::thread> pool;
        std::atomic<bool> abort{false};
        for (int w = 0; w < workers; ++w)
          pool.emplace_back([&] {
            while (!abort) {
              long long a = next.fetch_add(1);
              if (a >= arrangements) break;
              try {
                body(a);
              } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(mu);
                errors.push_back(e.what());
                abort = true;
              }
            }
          });
        for (auto& t : pool) t.join();
      } catch (...) {
        c.fail("unexpected");
      }
      (void)bad;
      if (!errors.empty())
        c.fail("(" + std::to_string(cs.d) + "," + std::to_string(cs.n) +
               "): " + errors.front());
    }
  });

  // 4. First-moment gates at (d, n) = (3, 6), isotropic and anisotropic.
  criterion("4 first-moment gates", [](Criterion& c) {
    const long long reps = budget(200000);
    for (bool aniso : {false, true}) {
      ExperimentConfig cfg;
      cfg.d = 3;
      cfg.n = 6;
      cfg.replicates = reps;
      cfg.inner_mc_samples = 16;
      cfg.master_seed = aniso ? 4202 : 4201;
      cfg.functionals = {"f_1", "f_2", "U_1", "V_3", "Lambda_1"};
      if (aniso)
        cfg.distribution =
            DirectionDistribution::anisotropic(Eigen::Vector3d(1.0, 1.7, 2.6));
      std::string tag = aniso ? "anisotropic" : "isotropic";
      check_gates(c, run(cfg), tag + " uniform-cell");

      cfg.model = ConeModel::cover_efron_dual;
      cfg.master_seed += 10;
      cfg.functionals = {"f_2", "Lambda_2"};
      check_gates(c, run(cfg), tag + " spanned-cone");
    }
  });

  // 5. Quadrature constants and the fixed-direction cone.
  criterion("5 theta and the fixed-direction cone", [](Criterion& c) {
    for (long long n = 0; n <= 20; ++n)
      if (!theta(n, 2).agrees_with(PreciseReal(1) / PreciseReal(n + 1), 1e-25))
        c.fail("theta(n,2) != 1/(n+1) at n=" + std::to_string(n));
    if (!theta(1, 3).agrees_with(PreciseReal(1) / PreciseReal(2), 1e-25))
      c.fail("theta(1,3) != 1/2");

    ExperimentConfig cfg;
    cfg.d = 3;
    cfg.n = 5;
    cfg.model = ConeModel::e_cone;
    cfg.replicates = budget(100000);
    cfg.master_seed = 5301;
    cfg.functionals = {"V_3"};
    check_gates(c, run(cfg), "zero-cell volume");

    // Volume-weighting identity for f_1 at (3, 5), both sides Monte Carlo.
    const long long reps = budget(100000);
    const double factor = to_double(schlafli_count(5, 3));
    Eigen::VectorXd lhs(reps), rhs(reps);
    DirectionDistribution iso;
    Eigen::VectorXd e = Eigen::VectorXd::Unit(3, 0);
    for (long long t = 0; t < reps; ++t) {
      RngStream rng(5302, static_cast<std::uint64_t>(t));
      std::optional<ConeRep> zero_cell;
      while (!zero_cell) {
        auto arr = sample_arrangement(5, 3, iso, rng);
        zero_cell = sample_e_cone(arr, e);
      }
      lhs(t) = face_count(*zero_cell, 1);
      RngStream rng2(5303, static_cast<std::uint64_t>(t));
      auto arr2 = sample_arrangement(5, 3, iso, rng2);
      ConeRep cell = sample_schlafli(arr2, rng2);
      rhs(t) = factor * face_count(cell, 1) *
               intrinsic_volume(cell, 3, 16, rng2).value;
    }
    double ml = lhs.mean(), mr = rhs.mean();
    double vl = (lhs.array() - ml).square().sum() / (reps - 1);
    double vr = (rhs.array() - mr).square().sum() / (reps - 1);
    double se = std::sqrt(vl / reps + vr / reps);
    if (std::abs(ml - mr) > 4 * se)
      c.fail("volume-weighting gate: " + std::to_string(ml) + " vs " +
             std::to_string(mr) + " se=" + std::to_string(se));
  });

  // 6. Covariance matrices (the headline second moments).
  criterion("6 covariance matrices", [](Criterion& c) {
    struct Case {
      int d;
      long long n;
    };
    std::uint64_t seed = 6401;
    for (Case cs : {Case{2, 4}, Case{2, 6}, Case{3, 6}}) {
      ExperimentReport rep =
          covariance_experiment(cs.d, cs.n, budget(200000), seed++);
      check_gates(c, rep,
                  "(" + std::to_string(cs.d) + "," + std::to_string(cs.n) + ")");
    }
  });

  // 7. Weighted-cone identities and the two-route agreement.
  criterion("7 weighted-cone identities", [](Criterion& c) {
    for (ConeModel model : {ConeModel::ckj, ConeModel::dkj}) {
      ExperimentConfig cfg;
      cfg.d = 3;
      cfg.n = 6;
      cfg.model = model;
      cfg.k = 2;
      cfg.j = 1;
      cfg.replicates = budget(50000);
      cfg.inner_mc_samples = 16;
      cfg.master_seed = model == ConeModel::ckj ? 7501 : 7502;
      cfg.functionals = {"1", "f_1", "V_3"};
      check_gates(c, run(cfg), to_string(model));
    }
    // Kolmogorov-Smirnov on the volume between the two spanned-cone routes.
    const long long m = budget(20000);
    std::vector<double> va, vb;
    va.reserve(m);
    vb.reserve(m);
    DirectionDistribution iso;
    for (long long t = 0; t < m; ++t) {
      RngStream rng(7503, static_cast<std::uint64_t>(t));
      GeneratorCone direct = sample_cover_efron_direct(6, 3, iso, rng);
      va.push_back(intrinsic_volume(direct, 3, 16, rng).value);
      RngStream rng2(7504, static_cast<std::uint64_t>(t));
      auto arr = sample_arrangement(6, 3, iso, rng2);
      GeneratorCone dual = sample_cover_efron_dual(arr, rng2);
      vb.push_back(intrinsic_volume(dual, 3, 16, rng2).value);
    }
    double dstat = testhelpers::ks_statistic(va, vb);
    double crit = testhelpers::ks_critical(1e-3, va.size(), vb.size());
    if (dstat >= crit)
      c.fail("KS volume statistic " + std::to_string(dstat) + " >= " +
             std::to_string(crit));
  });

  // 8. Deterministic geometric identities.
  criterion("8 geometric identities", [](Criterion& c) {
    DirectionDistribution iso;
    // Exact paths in dimensions 2 and 3: residuals at rounding level.
    for (int d = 2; d <= 3; ++d) {
      RngStream rng(8601 + d, 0);
      long long n = d == 2 ? 4 : 5;
      auto arr = sample_arrangement(n, d, iso, rng);
      for (int j = 1; j <= d - 1; ++j)
        for (int k = j; k <= d; ++k)
          for (int r = 1; r <= d; ++r) {
            auto res = check_identity_73(arr, j, k, r, {}, 100, rng);
            if (res.residual >= 1e-10)
              c.fail("section identity residual " + std::to_string(res.residual) +
                     " at d=" + std::to_string(d));
          }
      for (int k = 1; k <= d; ++k) {
        auto res = check_tiling_CE1(arr, k, 100, rng);
        if (res.residual >= 1e-10)
          c.fail("tiling residual " + std::to_string(res.residual) +
                 " at d=" + std::to_string(d));
      }
    }
    // Dimension 4 passes at 4 combined standard errors.
    {
      RngStream rng(8605, 0);
      auto arr = sample_arrangement(6, 4, iso, rng);
      int inner = quick ? 2000 : 20000;
      for (auto [j, k, r] : std::vector<std::array<int, 3>>{
               {1, 2, 2}, {1, 3, 1}, {2, 3, 4}, {3, 4, 4}}) {
        auto res = check_identity_73(arr, j, k, r, {}, inner, rng);
        if (!res.pass)
          c.fail("section identity at d=4 (j=" + std::to_string(j) +
                 ",k=" + std::to_string(k) + ",r=" + std::to_string(r) + ")");
      }
      for (int k : {2, 4}) {
        auto res = check_tiling_CE1(arr, k, inner, rng);
        if (!res.pass) c.fail("tiling at d=4 k=" + std::to_string(k));
      }
    }
    // Per-cell hitting-probability checks.
    {
      RngStream rng(8606, 0);
      auto arr = sample_arrangement(5, 3, iso, rng);
      auto cells = enumerate_cells(arr);
      int inner = quick ? 4000 : 40000;
      for (int idx : {0, 3}) {
        const auto& cell = cells[idx];
        for (int j = 1; j <= 2; ++j)
          if (!check_cell_duality(cell, j, inner, rng).pass)
            c.fail("duality at j=" + std::to_string(j));
        for (int j = 0; j <= 2; ++j)
          if (!check_crofton(cell, j, inner, rng).pass)
            c.fail("Crofton at j=" + std::to_string(j));
      }
    }
  });

  // 9. Reproducibility across worker counts.
  criterion("9 reproducibility", [](Criterion& c) {
    ExperimentConfig cfg;
    cfg.d = 3;
    cfg.n = 6;
    cfg.replicates = budget(2000);
    cfg.inner_mc_samples = 16;
    cfg.master_seed = 424242;
    cfg.functionals = {"f_1", "V_3", "U_1"};
    std::string canon;
    for (int workers : {1, 2, 8}) {
      cfg.workers = workers;
      std::string got = to_canonical_json(run(cfg));
      if (canon.empty())
        canon = got;
      else if (got != canon)
        c.fail("report bytes differ at workers=" + std::to_string(workers));
    }
  });

  std::printf("%s: %d criterion failure(s)\n", g_failures == 0 ? "ALL PASS" : "FAILED",
              g_failures);
  return g_failures;
}
