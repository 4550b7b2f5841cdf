#pragma once

#include "conetess/moments.hpp"
#include "conetess/sampler.hpp"

#include <string>
#include <vector>

namespace conetess {

enum class ConeModel { schlafli, e_cone, cover_efron_direct, cover_efron_dual, ckj, dkj };

std::string to_string(ConeModel model);
ConeModel cone_model_from_string(const std::string& name);

/// A Monte Carlo comparison run: which random-cone model, which functionals,
/// how many replicates, and the statistical gate width. Weighted models
/// (ckj/dkj) compare against their reweighted tessellation identity instead
/// of closed forms; see run().
struct ExperimentConfig {
  int d = 3;
  long long n = 6;
  ConeModel model = ConeModel::schlafli;
  int k = 0, j = 0;  // ckj / dkj parameters
  long long replicates = 1000;
  int inner_mc_samples = 64;
  DirectionDistribution distribution;
  std::uint64_t master_seed = 1;
  std::vector<std::string> functionals;
  double sigma_gate = 4.0;
  int workers = 0;  // 0: CONETESS_THREADS or hardware concurrency
};

struct FunctionalRecord {
  std::string name;
  double estimate = 0;
  double se = 0;
  double exact = 0;
  double exact_err = 0;
  double z = 0;
  bool pass = false;
};

struct ExperimentReport {
  int schema_version = 1;
  ExperimentConfig config;
  std::vector<FunctionalRecord> results;
  long long hard_assertion_failures = 0;
  double wall_time_ms = 0;
  long long resamples = 0;
  std::uint64_t seed = 0;

  bool all_pass() const;
};

/// A combinatorial count assertion failed; the offending arrangement has
/// been dumped for triage at the given path.
struct HardAssertionError : std::runtime_error {
  std::string triage_path;
  HardAssertionError(const std::string& what, std::string path)
      : std::runtime_error(what), triage_path(std::move(path)) {}
};

int worker_count(int requested = 0);

/// Run the configured experiment: per-replicate sampling on independent
/// substreams, compensated aggregation in replicate order (bit-reproducible
/// for any worker count), one gated record per functional.
ExperimentReport run(const ExperimentConfig& config);

/// Empirical covariance matrix of (Lambda_1..Lambda_d) over uniform cells
/// against the closed form, entrywise at 4 jackknife standard errors, plus
/// the facet-count second moment of the spanned-cone model sampled by
/// independent rejection.
ExperimentReport covariance_experiment(int d, long long n, long long replicates,
                                       std::uint64_t seed, int workers = 0);

/// Deterministic per-arrangement checks over fresh arrangements: exact cell
/// and face counts, face-cell incidence, total solid angle, per-cell duality
/// and Crofton consistency, the section decomposition identity and the
/// conjugate-face tiling.
ExperimentReport identity_suite(int d, long long n, int arrangements,
                                std::uint64_t seed, int workers = 0);

void write_report(const ExperimentReport& report, const std::string& path);
ExperimentReport read_report(const std::string& path);
void write_csv(const ExperimentReport& report, const std::string& path);

/// Stable serialization with the wall time zeroed; byte-identical for
/// identical configs and seeds regardless of worker count.
std::string to_canonical_json(const ExperimentReport& report);

ExperimentConfig config_from_json_file(const std::string& path);

}  // namespace conetess
