#include "conetess/experiments.hpp"
#include "conetess/moments.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

using namespace conetess;

constexpr int kExitPass = 0;
constexpr int kExitGateFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitHardAssertion = 3;

std::string decimal17(const MomentValue& v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v.to_double());
  return buf;
}

void emit_moments_table(long long n, int d, std::ostream& os) {
  auto row = [&](const std::string& name, const MomentValue& v) {
    os << name << '\t' << (v.is_rational() ? v.to_string() : "-") << '\t'
       << (v.is_rational() ? decimal17(v) : v.real->to_string(25)) << '\n';
  };
  for (int k = 1; k <= d; ++k)
    row("E_f_" + std::to_string(k) + "_schlafli", expected_f_schlafli(n, d, k));
  for (int k = 0; k <= d - 1; ++k)
    row("E_f_" + std::to_string(k) + "_coverefron", expected_f_cover_efron(n, d, k));
  for (int k = 0; k <= d - 1; ++k)
    row("E_U_" + std::to_string(k) + "_schlafli", expected_U_schlafli(n, d, k));
  for (int k = 1; k <= d - 1; ++k)
    row("E_U_" + std::to_string(k) + "_coverefron", expected_U_cover_efron(n, d, k));
  for (int j = 0; j <= d; ++j)
    row("E_V_" + std::to_string(j) + "_schlafli", expected_V_schlafli(n, d, j));
  for (int j = 0; j <= d; ++j)
    row("E_V_" + std::to_string(j) + "_coverefron", expected_V_cover_efron(n, d, j));
  for (int k = 1; k <= d; ++k)
    row("E_Lambda_" + std::to_string(k) + "_schlafli", expected_lambda_schlafli(n, d, k));
  for (int k = 1; k <= d - 1; ++k)
    row("E_Lambda_" + std::to_string(k) + "_coverefron",
        expected_lambda_cover_efron(n, d, k));
  row("theta", expected_Vd_e_cone(n, d));
  row("E_V_" + std::to_string(d) + "_econe", expected_Vd_e_cone(n, d));
  for (int m = 1; m <= d; ++m)
    row("E_Lambda_" + std::to_string(m) + "_econe", expected_lambda_e_cone(n, d, d - m));
  for (int m = 1; m <= d; ++m)
    row("E_Lambda_" + std::to_string(m) + "_V_" + std::to_string(d) + "_schlafli",
        mixed_lambda_Vd(n, d, d - m));
  for (int s = 1; s <= d; ++s)
    for (int r = s; r <= d; ++r)
      row("E_Lambda_" + std::to_string(s) + "_Lambda_" + std::to_string(r) + "_schlafli",
          second_moment_lambda(n, d, s, r));
  if (n >= d)
    row("E_f_" + std::to_string(d - 1) + "_sq_coverefron",
        second_moment_facets_cover_efron(n, d));
}

void emit_covariance_table(long long n, int d, std::ostream& os) {
  CovarianceMatrix cov = covariance_matrix_lambda(n, d);
  for (int r = 1; r <= d; ++r) {
    for (int s = 1; s <= d; ++s) {
      os << cov.at(r, s).to_string(25);
      os << (s == d ? '\n' : '\t');
    }
  }
}

void print_report(const ExperimentReport& report) {
  std::printf("%-36s %14s %12s %14s %8s  %s\n", "name", "estimate", "se", "exact",
              "z", "gate");
  for (const auto& r : report.results)
    std::printf("%-36s %14.8f %12.3g %14.8f %+8.2f  %s\n", r.name.c_str(), r.estimate,
                r.se, r.exact, r.z, r.pass ? "pass" : "FAIL");
  std::printf("hard_assertion_failures=%lld resamples=%lld wall=%.0f ms\n",
              report.hard_assertion_failures, report.resamples, report.wall_time_ms);
}

int finish(const ExperimentReport& report, const std::string& out_dir) {
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_report(report, out_dir + "/report.json");
    write_csv(report, out_dir + "/report.csv");
  }
  print_report(report);
  return report.all_pass() ? kExitPass : kExitGateFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"conetess: closed-form moments of random conical tessellations "
               "and their Monte Carlo verification"};
  app.require_subcommand(1);

  // exact
  auto* exact = app.add_subcommand("exact", "print closed-form values for (d, n)");
  int ex_d = 3;
  long long ex_n = 6;
  std::string ex_table = "moments", ex_out = "stdout";
  exact->add_option("--d", ex_d, "ambient dimension (>= 2)")->required();
  exact->add_option("--n", ex_n, "number of hyperplanes / directions")->required();
  exact->add_option("--table", ex_table, "moments|covariance")
      ->check(CLI::IsMember({"moments", "covariance"}));
  exact->add_option("--out", ex_out, "output path or 'stdout'");

  // simulate
  auto* sim = app.add_subcommand("simulate", "run a Monte Carlo experiment");
  std::string sim_config, sim_out = ".", sim_model, sim_dist = "";
  ExperimentConfig cfg;
  long long sim_d = 0, sim_n = -1, sim_reps = 0, sim_seed = 0;
  int sim_k = 0, sim_j = 0, sim_inner = 0;
  double sim_gate = 0;
  std::vector<std::string> sim_fns;
  std::vector<double> sim_scales;
  sim->add_option("--config", sim_config, "JSON config file (flags override)");
  sim->add_option("--d", sim_d, "dimension");
  sim->add_option("--n", sim_n, "hyperplane count");
  sim->add_option("--model", sim_model,
                  "schlafli|e_cone|cover_efron_direct|cover_efron_dual|ckj|dkj");
  sim->add_option("--k", sim_k, "weighted-cone k");
  sim->add_option("--j", sim_j, "weighted-cone j");
  sim->add_option("--replicates", sim_reps, "number of replicates");
  sim->add_option("--inner-mc", sim_inner, "inner Monte Carlo samples");
  sim->add_option("--seed", sim_seed, "master seed");
  sim->add_option("--functionals", sim_fns, "functional names (e.g. f_1 V_3 Lambda_1)");
  sim->add_option("--sigma-gate", sim_gate, "gate width in combined standard errors");
  sim->add_option("--distribution", sim_dist, "isotropic|anisotropic");
  sim->add_option("--scales", sim_scales, "diagonal scales for the anisotropic law");
  sim->add_option("--out", sim_out, "output directory for report.json/report.csv");

  // verify
  auto* ver = app.add_subcommand("verify", "run the canonical acceptance bundle for (d, n)");
  int ver_d = 3;
  long long ver_n = 6, ver_budget = 200000, ver_seed = 42;
  ver->add_option("--d", ver_d, "dimension (>= 2)")->required();
  ver->add_option("--n", ver_n, "hyperplane count")->required();
  ver->add_option("--budget", ver_budget, "replicates for the gated comparisons");
  ver->add_option("--seed", ver_seed, "master seed");

  // covariance
  auto* cov = app.add_subcommand(
      "covariance", "empirical vs exact covariance of (Lambda_1..Lambda_d)");
  int cov_d = 3;
  long long cov_n = 6, cov_reps = 200000, cov_seed = 42;
  std::string cov_out;
  cov->add_option("--d", cov_d, "dimension")->required();
  cov->add_option("--n", cov_n, "hyperplane count")->required();
  cov->add_option("--replicates", cov_reps, "replicates");
  cov->add_option("--seed", cov_seed, "master seed");
  cov->add_option("--out", cov_out, "output directory");

  // identities
  auto* ids = app.add_subcommand("identities", "deterministic per-arrangement identity checks");
  int ids_d = 3, ids_m = 5;
  long long ids_n = 5, ids_seed = 42;
  ids->add_option("--d", ids_d, "dimension")->required();
  ids->add_option("--n", ids_n, "hyperplane count")->required();
  ids->add_option("--arrangements", ids_m, "fresh arrangements to check");
  ids->add_option("--seed", ids_seed, "master seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*exact) {
      if (ex_d < 2 || ex_n < 0) {
        std::cerr << "exact: need d >= 2 and n >= 0\n";
        return kExitUsage;
      }
      std::ofstream file;
      std::ostream* os = &std::cout;
      if (ex_out != "stdout") {
        file.open(ex_out);
        if (!file) {
          std::cerr << "exact: cannot open " << ex_out << "\n";
          return kExitUsage;
        }
        os = &file;
      }
      if (ex_table == "moments")
        emit_moments_table(ex_n, ex_d, *os);
      else
        emit_covariance_table(ex_n, ex_d, *os);
      return kExitPass;
    }

    if (*sim) {
      if (!sim_config.empty()) cfg = config_from_json_file(sim_config);
      if (sim_d > 0) cfg.d = static_cast<int>(sim_d);
      if (sim_n >= 0) cfg.n = sim_n;
      if (!sim_model.empty()) cfg.model = cone_model_from_string(sim_model);
      if (sim_k > 0) cfg.k = sim_k;
      if (sim_j > 0) cfg.j = sim_j;
      if (sim_reps > 0) cfg.replicates = sim_reps;
      if (sim_inner > 0) cfg.inner_mc_samples = sim_inner;
      if (sim_seed > 0) cfg.master_seed = static_cast<std::uint64_t>(sim_seed);
      if (!sim_fns.empty()) cfg.functionals = sim_fns;
      if (sim_gate > 0) cfg.sigma_gate = sim_gate;
      if (sim_dist == "anisotropic") {
        Eigen::VectorXd s(cfg.d);
        for (int i = 0; i < cfg.d; ++i)
          s(i) = i < static_cast<int>(sim_scales.size()) ? sim_scales[i] : 1.0;
        cfg.distribution = DirectionDistribution::anisotropic(s);
      } else if (sim_dist == "isotropic") {
        cfg.distribution = DirectionDistribution::isotropic();
      }
      return finish(run(cfg), sim_out);
    }

    if (*ver) {
      if (ver_d < 2 || ver_n < ver_d) {
        std::cerr << "verify: need d >= 2 and n >= d\n";
        return kExitUsage;
      }
      int fails = 0;
      // Exact-layer identities for this (d, n).
      {
        bool ok = true;
        BigRational total(0);
        for (int j = 0; j <= ver_d; ++j)
          total += *expected_V_schlafli(ver_n, ver_d, j).rational;
        ok = ok && total == 1;
        for (int s = 1; s <= ver_d && ok; ++s)
          for (int r = 1; r <= ver_d && ok; ++r)
            ok = second_moment_lambda(ver_n, ver_d, s, r)
                     .to_precise()
                     .agrees_with(
                         second_moment_lambda_asym(ver_n, ver_d, s, r).to_precise(),
                         1e-25);
        std::printf("exact identities: %s\n", ok ? "pass" : "FAIL");
        if (!ok) ++fails;
      }
      ExperimentConfig vc;
      vc.d = ver_d;
      vc.n = ver_n;
      vc.replicates = ver_budget;
      vc.master_seed = static_cast<std::uint64_t>(ver_seed);
      vc.functionals = {"f_1", "f_" + std::to_string(ver_d - 1), "U_1",
                        "V_" + std::to_string(ver_d), "Lambda_1",
                        "Lambda_1*Lambda_" + std::to_string(ver_d)};
      ExperimentReport first = run(vc);
      print_report(first);
      if (!first.all_pass()) ++fails;
      ExperimentReport covr = covariance_experiment(
          ver_d, ver_n, ver_budget, static_cast<std::uint64_t>(ver_seed) + 1);
      print_report(covr);
      if (!covr.all_pass()) ++fails;
      ExperimentReport idsr =
          identity_suite(ver_d, ver_n, 3, static_cast<std::uint64_t>(ver_seed) + 2);
      print_report(idsr);
      if (!idsr.all_pass()) ++fails;
      std::printf("verify: %s\n", fails == 0 ? "all-pass" : "FAILURES");
      return fails == 0 ? kExitPass : kExitGateFailure;
    }

    if (*cov) {
      return finish(covariance_experiment(cov_d, cov_n, cov_reps,
                                          static_cast<std::uint64_t>(cov_seed)),
                    cov_out);
    }

    if (*ids) {
      ExperimentReport report =
          identity_suite(ids_d, ids_n, ids_m, static_cast<std::uint64_t>(ids_seed));
      print_report(report);
      return report.all_pass() ? kExitPass : kExitGateFailure;
    }
  } catch (const HardAssertionError& e) {
    std::cerr << "hard assertion failure: " << e.what();
    if (!e.triage_path.empty()) std::cerr << " (triage: " << e.triage_path << ")";
    std::cerr << "\n";
    return kExitHardAssertion;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitGateFailure;
  }
  return kExitUsage;
}
