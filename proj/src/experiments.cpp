#include "conetess/experiments.hpp"

#include "conetess/identities.hpp"

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

namespace conetess {

namespace {

using nlohmann::json;

// Neumaier-compensated summation; applied in replicate-index order so that
// results do not depend on the worker count.
class CompensatedSum {
 public:
  void add(double v) {
    double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0, comp_ = 0;
};

void parallel_replicates(long long count, int workers,
                         const std::function<void(long long)>& body) {
  workers = std::max(1, std::min<long long>(workers, count) > 0
                            ? static_cast<int>(std::min<long long>(workers, count))
                            : 1);
  if (workers == 1) {
    for (long long i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<long long> next{0};
  std::atomic<bool> abort{false};
  std::exception_ptr first_error;
  std::mutex error_mu;
  auto work = [&] {
    while (!abort.load(std::memory_order_relaxed)) {
      long long i = next.fetch_add(1);
      if (i >= count) break;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!first_error) first_error = std::current_exception();
        abort.store(true);
        break;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::string dump_triage(const Arrangement& arr) {
  json out;
  out["d"] = arr.dim();
  out["seed"] = arr.provenance().master_seed;
  out["stream"] = arr.provenance().stream_index;
  json normals = json::array();
  char buf[64];
  for (int i = 0; i < arr.size(); ++i) {
    json col = json::array();
    for (int r = 0; r < arr.dim(); ++r) {
      std::snprintf(buf, sizeof buf, "%a", arr.normals()(r, i));
      col.push_back(std::string(buf));
    }
    normals.push_back(col);
  }
  out["normals"] = normals;
  std::string path = "conetess_triage_seed" + std::to_string(arr.provenance().master_seed) +
                     "_stream" + std::to_string(arr.provenance().stream_index) + ".json";
  std::ofstream f(path);
  f << out.dump(2) << "\n";
  return path;
}

// --- functional naming ---

struct Functional {
  enum class Type {
    one,
    face_count,
    quermass,
    intrinsic,
    lambda,
    lambda_product,
    lambda_vd,
    face_count_sq,
    size_Y
  };
  Type type = Type::one;
  int a = 0, b = 0;
  std::string name;
};

Functional parse_functional(const std::string& name) {
  Functional f;
  f.name = name;
  auto starts = [&](const char* p) { return name.rfind(p, 0) == 0; };
  if (name == "1") {
    f.type = Functional::Type::one;
    return f;
  }
  if (starts("f_") && name.size() > 2 && name.substr(name.size() - 2) == "^2") {
    f.type = Functional::Type::face_count_sq;
    f.a = std::stoi(name.substr(2, name.size() - 4));
    return f;
  }
  if (starts("f_")) {
    f.type = Functional::Type::face_count;
    f.a = std::stoi(name.substr(2));
    return f;
  }
  if (starts("U_")) {
    f.type = Functional::Type::quermass;
    f.a = std::stoi(name.substr(2));
    return f;
  }
  if (starts("V_")) {
    f.type = Functional::Type::intrinsic;
    f.a = std::stoi(name.substr(2));
    return f;
  }
  if (starts("Y_")) {
    auto sep = name.find('_', 2);
    f.type = Functional::Type::size_Y;
    f.a = std::stoi(name.substr(2, sep - 2));
    f.b = std::stoi(name.substr(sep + 1));
    return f;
  }
  if (starts("Lambda_")) {
    auto star = name.find('*');
    if (star == std::string::npos) {
      f.type = Functional::Type::lambda;
      f.a = std::stoi(name.substr(7));
      return f;
    }
    f.a = std::stoi(name.substr(7, star - 7));
    std::string rest = name.substr(star + 1);
    if (rest.rfind("Lambda_", 0) == 0) {
      f.type = Functional::Type::lambda_product;
      f.b = std::stoi(rest.substr(7));
    } else if (rest.rfind("V_", 0) == 0) {
      f.type = Functional::Type::lambda_vd;
      f.b = std::stoi(rest.substr(2));
    } else {
      throw ConfigError("unknown functional: " + name);
    }
    return f;
  }
  throw ConfigError("unknown functional: " + name);
}

// --- measurement ---

struct SampledCone {
  std::optional<ConeRep> rep;
  std::optional<GeneratorCone> gen;
};

AngleEstimate lambda_single(const ConeRep& cone, int k, int inner, RngStream& rng) {
  SpanCone sc = span_cone(cone);
  const int m = static_cast<int>(sc.span.cols());
  if (k > m) return AngleEstimate{0.0, 0.0, AngleMethod::exact1d};
  std::vector<AngleEstimate> parts;
  for (const auto& face : span_faces(sc.rows, m, k))
    parts.push_back(solid_angle(face.rows, k, inner, rng));
  return angle_sum(parts);
}

AngleEstimate lambda_single(const GeneratorCone& cone, int k, int inner,
                            RngStream& rng) {
  const int d = cone.dim();
  if (k == d) return intrinsic_volume(cone, d, inner, rng);
  Eigen::MatrixXd rows = cone.generators.transpose();
  std::vector<AngleEstimate> parts;
  for (const auto& g : span_faces(rows, d, d - k)) {
    Eigen::MatrixXd gens(d, g.active_rows.size());
    for (size_t i = 0; i < g.active_rows.size(); ++i)
      gens.col(i) = cone.generators.col(g.active_rows[i]);
    parts.push_back(solid_angle(simplicial_cone(gens), inner, rng));
  }
  return angle_sum(parts);
}

double measure_one(const Functional& f, const SampledCone& cone, int inner,
                   RngStream& rng) {
  switch (f.type) {
    case Functional::Type::one:
      return 1.0;
    case Functional::Type::face_count:
      return cone.rep ? face_count(*cone.rep, f.a) : face_count(*cone.gen, f.a);
    case Functional::Type::face_count_sq: {
      double c = cone.rep ? face_count(*cone.rep, f.a) : face_count(*cone.gen, f.a);
      return c * c;
    }
    case Functional::Type::quermass:
      return cone.rep ? quermass(*cone.rep, f.a, inner, rng).value
                      : quermass(*cone.gen, f.a, inner, rng).value;
    case Functional::Type::intrinsic:
      return cone.rep ? intrinsic_volume(*cone.rep, f.a, inner, rng).value
                      : intrinsic_volume(*cone.gen, f.a, inner, rng).value;
    case Functional::Type::lambda:
      return cone.rep ? lambda_single(*cone.rep, f.a, inner, rng).value
                      : lambda_single(*cone.gen, f.a, inner, rng).value;
    case Functional::Type::lambda_product: {
      double x = cone.rep ? lambda_single(*cone.rep, f.a, inner, rng).value
                          : lambda_single(*cone.gen, f.a, inner, rng).value;
      double y = cone.rep ? lambda_single(*cone.rep, f.b, inner, rng).value
                          : lambda_single(*cone.gen, f.b, inner, rng).value;
      return x * y;
    }
    case Functional::Type::lambda_vd: {
      double x = cone.rep ? lambda_single(*cone.rep, f.a, inner, rng).value
                          : lambda_single(*cone.gen, f.a, inner, rng).value;
      double y = cone.rep ? intrinsic_volume(*cone.rep, f.b, inner, rng).value
                          : intrinsic_volume(*cone.gen, f.b, inner, rng).value;
      return x * y;
    }
    case Functional::Type::size_Y:
      if (!cone.rep) throw ConfigError("Y functionals need a tessellation cone");
      return size_functional_Y(*cone.rep, f.a, f.b, inner, rng).value;
  }
  throw ConfigError("unhandled functional");
}

MomentValue exact_moment(const ExperimentConfig& cfg, const Functional& f) {
  const int d = cfg.d;
  const long long n = cfg.n;
  const bool cover = cfg.model == ConeModel::cover_efron_direct ||
                     cfg.model == ConeModel::cover_efron_dual;
  switch (cfg.model) {
    case ConeModel::schlafli:
      switch (f.type) {
        case Functional::Type::face_count:
          if (f.a >= 1) return expected_f_schlafli(n, d, f.a);
          break;
        case Functional::Type::quermass:
          return expected_U_schlafli(n, d, f.a);
        case Functional::Type::intrinsic:
          return expected_V_schlafli(n, d, f.a);
        case Functional::Type::lambda:
          return expected_lambda_schlafli(n, d, f.a);
        case Functional::Type::lambda_product:
          return second_moment_lambda(n, d, f.b, f.a);
        case Functional::Type::lambda_vd:
          if (f.b == d) return second_moment_lambda(n, d, f.a, d);
          break;
        case Functional::Type::size_Y:
          return expected_Y(n, d, d - f.b, f.a - f.b);
        default:
          break;
      }
      break;
    case ConeModel::e_cone:
      switch (f.type) {
        case Functional::Type::intrinsic:
          if (f.a == d) return expected_Vd_e_cone(n, d);
          break;
        case Functional::Type::lambda:
          return expected_lambda_e_cone(n, d, d - f.a);
        default:
          break;
      }
      break;
    default:
      if (cover) {
        switch (f.type) {
          case Functional::Type::face_count:
            return expected_f_cover_efron(n, d, f.a);
          case Functional::Type::quermass:
            return expected_U_cover_efron(n, d, f.a);
          case Functional::Type::intrinsic:
            return expected_V_cover_efron(n, d, f.a);
          case Functional::Type::lambda:
            return expected_lambda_cover_efron(n, d, f.a);
          case Functional::Type::face_count_sq:
            if (f.a == d - 1) return second_moment_facets_cover_efron(n, d);
            break;
          default:
            break;
        }
      }
      break;
  }
  throw ConfigError("no closed-form value for functional '" + f.name +
                    "' under model " + to_string(cfg.model));
}

struct MeanSe {
  double mean = 0, se = 0;
};

MeanSe column_stats(const Eigen::MatrixXd& values, int col) {
  const long long n = values.rows();
  CompensatedSum sum;
  for (long long i = 0; i < n; ++i) sum.add(values(i, col));
  double mean = sum.value() / static_cast<double>(n);
  CompensatedSum sq;
  for (long long i = 0; i < n; ++i) {
    double dlt = values(i, col) - mean;
    sq.add(dlt * dlt);
  }
  double var = (n > 1) ? sq.value() / static_cast<double>(n - 1) : 0.0;
  return {mean, std::sqrt(var / static_cast<double>(n))};
}

FunctionalRecord gate_record(std::string name, const MeanSe& est, double exact,
                             double exact_err, double sigma_gate) {
  FunctionalRecord rec;
  rec.name = std::move(name);
  rec.estimate = est.mean;
  rec.se = est.se;
  rec.exact = exact;
  rec.exact_err = exact_err;
  double combined = std::sqrt(est.se * est.se + exact_err * exact_err);
  double diff = std::abs(est.mean - exact);
  rec.z = combined > 0 ? (est.mean - exact) / combined : (diff > 0 ? INFINITY : 0.0);
  rec.pass = diff <= sigma_gate * combined;
  return rec;
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.d < 2) throw ConfigError("config: d must be >= 2");
  if (cfg.n < 0) throw ConfigError("config: n must be >= 0");
  if (cfg.replicates < 100)
    throw ConfigError("config: gated comparisons need replicates >= 100");
  if (cfg.inner_mc_samples < 1) throw ConfigError("config: inner_mc_samples >= 1");
  if (cfg.functionals.empty()) throw ConfigError("config: no functionals requested");
  if (cfg.model == ConeModel::ckj || cfg.model == ConeModel::dkj) {
    if (cfg.k < 1 || cfg.k > cfg.d || cfg.j < 1 || cfg.j > cfg.k)
      throw ConfigError("config: ckj/dkj require 1 <= j <= k <= d");
    if (cfg.model == ConeModel::ckj && cfg.n <= cfg.k - cfg.j)
      throw ConfigError("config: ckj requires n > k - j");
    if (cfg.model == ConeModel::dkj && cfg.n <= cfg.d - cfg.j)
      throw ConfigError("config: dkj requires n > d - j");
    if (cfg.model == ConeModel::dkj && !cfg.distribution.is_isotropic())
      throw ConfigError("config: dkj is defined for the isotropic distribution only");
  }
  if (cfg.model == ConeModel::e_cone && !cfg.distribution.is_isotropic())
    throw ConfigError("config: the e-cone comparisons require isotropy");
  if (!cfg.distribution.is_isotropic()) {
    for (const auto& name : cfg.functionals) {
      Functional f = parse_functional(name);
      if (f.type == Functional::Type::lambda_product ||
          f.type == Functional::Type::lambda_vd ||
          f.type == Functional::Type::face_count_sq)
        throw ConfigError("config: second moments require the isotropic distribution");
    }
  }
}

SampledCone sample_model(const ExperimentConfig& cfg, RngStream& rng,
                         long long* resamples) {
  SampledCone out;
  switch (cfg.model) {
    case ConeModel::schlafli: {
      ArrangementPtr arr = sample_arrangement(cfg.n, cfg.d, cfg.distribution, rng, resamples);
      out.rep = sample_schlafli(arr, rng);
      return out;
    }
    case ConeModel::e_cone: {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(cfg.d);
      e(0) = 1.0;
      while (true) {
        ArrangementPtr arr =
            sample_arrangement(cfg.n, cfg.d, cfg.distribution, rng, resamples);
        auto cell = sample_e_cone(arr, e);
        if (cell) {
          out.rep = std::move(*cell);
          return out;
        }
        if (resamples) ++*resamples;
      }
    }
    case ConeModel::cover_efron_direct:
      out.gen = sample_cover_efron_direct(cfg.n, cfg.d, cfg.distribution, rng);
      return out;
    case ConeModel::cover_efron_dual: {
      ArrangementPtr arr = sample_arrangement(cfg.n, cfg.d, cfg.distribution, rng, resamples);
      out.gen = sample_cover_efron_dual(arr, rng);
      return out;
    }
    case ConeModel::ckj:
      out.rep = sample_weighted_Ckj(cfg.n, cfg.d, cfg.k, cfg.j, cfg.distribution, rng);
      return out;
    case ConeModel::dkj:
      out.rep = sample_weighted_Dkj(cfg.n, cfg.d, cfg.k, cfg.j, rng);
      return out;
  }
  throw ConfigError("unhandled model");
}

ExperimentReport run_weighted(const ExperimentConfig& cfg) {
  // Weighted cones have no standalone closed forms; they are gated against
  // the reweighted tessellation identity: E g(weighted) equals
  // factor * E (g Y_{s,t})(uniform cell of the reference tessellation).
  const int d = cfg.d;
  const bool second_kind = cfg.model == ConeModel::dkj;
  const long long ref_n = second_kind ? cfg.n - d + cfg.k : cfg.n;
  const int s = d - cfg.k + cfg.j;
  const int t = d - cfg.k;
  const double factor =
      to_double(2 * schlafli_count(ref_n, d) /
                (BigRational(pow2(cfg.k - cfg.j)) * face_count_total(ref_n, cfg.k, cfg.j)));

  std::vector<Functional> fns;
  for (const auto& name : cfg.functionals) fns.push_back(parse_functional(name));
  const long long R = cfg.replicates;
  const int F = static_cast<int>(fns.size());
  Eigen::MatrixXd lhs(R, F), rhs(R, F);
  std::atomic<long long> resamples{0};

  parallel_replicates(R, worker_count(cfg.workers), [&](long long r) {
    long long local_resamples = 0;
    RngStream rng(cfg.master_seed, static_cast<std::uint64_t>(r));
    SampledCone cone = sample_model(cfg, rng, &local_resamples);
    for (int f = 0; f < F; ++f)
      lhs(r, f) = measure_one(fns[f], cone, cfg.inner_mc_samples, rng);

    RngStream rng2(cfg.master_seed, static_cast<std::uint64_t>(R + r));
    ArrangementPtr arr =
        sample_arrangement(ref_n, d, cfg.distribution, rng2, &local_resamples);
    ConeRep cell = sample_schlafli(arr, rng2);
    SampledCone ref;
    ref.rep = cell;
    double y = size_functional_Y(cell, s, t, cfg.inner_mc_samples, rng2).value;
    for (int f = 0; f < F; ++f)
      rhs(r, f) =
          factor * y * measure_one(fns[f], ref, cfg.inner_mc_samples, rng2);
    resamples += local_resamples;
  });

  ExperimentReport report;
  report.config = cfg;
  report.seed = cfg.master_seed;
  report.resamples = resamples.load();
  for (int f = 0; f < F; ++f) {
    MeanSe left = column_stats(lhs, f);
    MeanSe right = column_stats(rhs, f);
    report.results.push_back(gate_record(fns[f].name + " (weighted identity)", left,
                                         right.mean, right.se, cfg.sigma_gate));
  }
  return report;
}

}  // namespace

std::string to_string(ConeModel model) {
  switch (model) {
    case ConeModel::schlafli: return "schlafli";
    case ConeModel::e_cone: return "e_cone";
    case ConeModel::cover_efron_direct: return "cover_efron_direct";
    case ConeModel::cover_efron_dual: return "cover_efron_dual";
    case ConeModel::ckj: return "ckj";
    case ConeModel::dkj: return "dkj";
  }
  return "unknown";
}

ConeModel cone_model_from_string(const std::string& name) {
  if (name == "schlafli") return ConeModel::schlafli;
  if (name == "e_cone") return ConeModel::e_cone;
  if (name == "cover_efron_direct") return ConeModel::cover_efron_direct;
  if (name == "cover_efron_dual") return ConeModel::cover_efron_dual;
  if (name == "ckj") return ConeModel::ckj;
  if (name == "dkj") return ConeModel::dkj;
  throw ConfigError("unknown model: " + name);
}

bool ExperimentReport::all_pass() const {
  if (hard_assertion_failures > 0) return false;
  for (const auto& r : results)
    if (!r.pass) return false;
  return true;
}

int worker_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CONETESS_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

ExperimentReport run(const ExperimentConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  validate(cfg);
  ExperimentReport report;
  if (cfg.model == ConeModel::ckj || cfg.model == ConeModel::dkj) {
    report = run_weighted(cfg);
  } else {
    std::vector<Functional> fns;
    for (const auto& name : cfg.functionals) fns.push_back(parse_functional(name));
    // Resolve the closed forms up front; unknown names fail before sampling.
    std::vector<MomentValue> exact;
    for (const auto& f : fns) exact.push_back(exact_moment(cfg, f));

    const long long R = cfg.replicates;
    const int F = static_cast<int>(fns.size());
    Eigen::MatrixXd values(R, F);
    std::atomic<long long> resamples{0};

    parallel_replicates(R, worker_count(cfg.workers), [&](long long r) {
      long long local_resamples = 0;
      RngStream rng(cfg.master_seed, static_cast<std::uint64_t>(r));
      SampledCone cone;
      try {
        cone = sample_model(cfg, rng, &local_resamples);
        for (int f = 0; f < F; ++f)
          values(r, f) = measure_one(fns[f], cone, cfg.inner_mc_samples, rng);
      } catch (const GeneralPositionError& e) {
        std::string path;
        if (cone.rep && cone.rep->arr) path = dump_triage(*cone.rep->arr);
        throw HardAssertionError(e.what(), path);
      }
      resamples += local_resamples;
    });

    report.config = cfg;
    report.seed = cfg.master_seed;
    report.resamples = resamples.load();
    for (int f = 0; f < F; ++f) {
      report.results.push_back(gate_record(fns[f].name, column_stats(values, f),
                                           exact[f].to_double(),
                                           exact[f].error_bound(), cfg.sigma_gate));
    }
  }
  report.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
          .count();
  return report;
}

ExperimentReport covariance_experiment(int d, long long n, long long replicates,
                                       std::uint64_t seed, int workers) {
  auto t0 = std::chrono::steady_clock::now();
  if (d < 2) throw ConfigError("covariance_experiment: d must be >= 2");
  if (replicates < 100) throw ConfigError("covariance_experiment: replicates >= 100");
  const int inner = d <= 3 ? 64 : 4096;
  const long long R = replicates;

  // Two independent face-content evaluations per replicate keep the
  // product estimators unbiased when the inner evaluation is Monte Carlo.
  Eigen::MatrixXd lam1(R, d), lam2(R, d);
  Eigen::VectorXd facet_sq(R);
  DirectionDistribution iso;
  std::atomic<long long> resamples{0};

  parallel_replicates(R, worker_count(workers), [&](long long r) {
    long long local_resamples = 0;
    RngStream rng(seed, static_cast<std::uint64_t>(r));
    ArrangementPtr arr;
    try {
      arr = sample_arrangement(n, d, iso, rng, &local_resamples);
      ConeRep cell = sample_schlafli(arr, rng);
      auto l1 = lambda_vector(cell, inner, rng);
      auto l2 = lambda_vector(cell, inner, rng);
      for (int k = 0; k < d; ++k) {
        lam1(r, k) = l1[k].value;
        lam2(r, k) = l2[k].value;
      }
    } catch (const GeneralPositionError& e) {
      std::string path = arr ? dump_triage(*arr) : std::string();
      throw HardAssertionError(e.what(), path);
    }
    RngStream rng2(seed, static_cast<std::uint64_t>(R + r));
    GeneratorCone ce = sample_cover_efron_direct(n, d, iso, rng2);
    double f = face_count(ce, d - 1);
    facet_sq(r) = f * f;
    resamples += local_resamples;
  });

  ExperimentReport report;
  report.config.d = d;
  report.config.n = n;
  report.config.model = ConeModel::schlafli;
  report.config.replicates = replicates;
  report.config.inner_mc_samples = inner;
  report.config.master_seed = seed;
  report.config.workers = workers;
  report.config.functionals = {"covariance"};
  report.seed = seed;
  report.resamples = resamples.load();

  CovarianceMatrix exact_cov = covariance_matrix_lambda(n, d);

  // Per-replicate symmetrized cross products and averaged values.
  Eigen::MatrixXd mean_lam = (lam1 + lam2) / 2.0;
  for (int r = 1; r <= d; ++r) {
    for (int s = r; s <= d; ++s) {
      Eigen::VectorXd p(R);
      for (long long i = 0; i < R; ++i)
        p(i) = 0.5 * (lam1(i, r - 1) * lam2(i, s - 1) + lam2(i, r - 1) * lam1(i, s - 1));
      CompensatedSum sp, sx, sy;
      for (long long i = 0; i < R; ++i) {
        sp.add(p(i));
        sx.add(mean_lam(i, r - 1));
        sy.add(mean_lam(i, s - 1));
      }
      const double Sp = sp.value(), Sx = sx.value(), Sy = sy.value();
      const double N = static_cast<double>(R);
      double cov = (Sp - Sx * Sy / N) / (N - 1);

      // Jackknife over replicates.
      Eigen::VectorXd loo(R);
      CompensatedSum loo_sum;
      for (long long i = 0; i < R; ++i) {
        double spi = Sp - p(i);
        double sxi = Sx - mean_lam(i, r - 1);
        double syi = Sy - mean_lam(i, s - 1);
        loo(i) = (spi - sxi * syi / (N - 1)) / (N - 2);
        loo_sum.add(loo(i));
      }
      double loo_mean = loo_sum.value() / N;
      CompensatedSum dev;
      for (long long i = 0; i < R; ++i) {
        double dlt = loo(i) - loo_mean;
        dev.add(dlt * dlt);
      }
      double se = std::sqrt((N - 1) / N * dev.value());

      const PreciseReal& exact = exact_cov.at(r, s);
      report.results.push_back(
          gate_record("Cov(Lambda_" + std::to_string(r) + ",Lambda_" + std::to_string(s) + ")",
                      MeanSe{cov, se}, exact.to_double(), exact.error_bound(), 4.0));
    }
  }
  for (int k = 1; k <= d; ++k) {
    Eigen::MatrixXd col = mean_lam.col(k - 1);
    MomentValue exact = expected_lambda_schlafli(n, d, k);
    report.results.push_back(gate_record("Lambda_" + std::to_string(k),
                                         column_stats(col, 0), exact.to_double(),
                                         exact.error_bound(), 4.0));
  }
  {
    MomentValue exact = second_moment_facets_cover_efron(n, d);
    report.results.push_back(gate_record(
        "f_" + std::to_string(d - 1) + "^2 (cover_efron_direct)",
        column_stats(facet_sq, 0), exact.to_double(), exact.error_bound(), 4.0));
  }
  report.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
          .count();
  return report;
}

ExperimentReport identity_suite(int d, long long n, int arrangements,
                                std::uint64_t seed, int workers) {
  auto t0 = std::chrono::steady_clock::now();
  if (d < 2) throw ConfigError("identity_suite: d must be >= 2");
  if (n < 1) throw ConfigError("identity_suite: n must be >= 1");
  if (arrangements < 1) throw ConfigError("identity_suite: arrangements >= 1");
  const int inner = 20000;
  DirectionDistribution iso;

  std::vector<std::vector<IdentityCheckResult>> all(arrangements);
  std::atomic<long long> resamples{0};

  parallel_replicates(arrangements, worker_count(workers), [&](long long a) {
    long long local_resamples = 0;
    RngStream rng(seed, static_cast<std::uint64_t>(a));
    ArrangementPtr arr;
    std::vector<IdentityCheckResult> checks;
    try {
      arr = sample_arrangement(n, d, iso, rng, &local_resamples);
      auto cells = enumerate_cells(arr);  // hard count inside

      for (int k = 1; k <= d - 1; ++k) {
        auto faces = enumerate_k_faces(arr, k);  // hard count inside
        // Face-cell incidence: every k-face lies in exactly 2^{d-k} cells.
        long long expected = 1ll << (d - k);
        for (const auto& face : faces) {
          long long hits = 0;
          for (const auto& cell : cells) {
            bool match = true;
            for (int i = 0; i < face.signs.size() && match; ++i)
              if (face.signs(i) != 0 && face.signs(i) != cell.signs(i)) match = false;
            if (match) ++hits;
          }
          if (hits != expected)
            throw GeneralPositionError("face-cell incidence is not 2^(d-k)");
        }
      }

      // Total solid angle of the tessellation.
      {
        std::vector<AngleEstimate> parts;
        for (const auto& cell : cells)
          parts.push_back(intrinsic_volume(cell, d, inner, rng));
        AngleEstimate total = angle_sum(parts);
        IdentityCheckResult res;
        res.name = "sum_Vd";
        res.lhs = total.value;
        res.rhs = 1.0;
        res.residual = std::abs(total.value - 1.0);
        res.tolerance = 4 * total.standard_error + 1e-9;
        res.pass = res.residual <= res.tolerance;
        checks.push_back(res);
      }

      // Per-cell duality, Crofton consistency, and the quermassintegral
      // links of the top intrinsic volumes, on a couple of sampled cells.
      const int probe_cells = std::min<int>(2, static_cast<int>(cells.size()));
      for (int c = 0; c < probe_cells; ++c) {
        const ConeRep& cell =
            cells[rng.uniform_index(static_cast<long long>(cells.size()))];
        for (int j = 1; j <= d - 1; ++j)
          checks.push_back(check_cell_duality(cell, j, inner, rng));
        for (int j = 0; j <= d - 1; ++j)
          checks.push_back(check_crofton(cell, j, inner, rng));
      }

      // Section decomposition identity over a small parameter grid.
      if (n > d - 1) {
        std::vector<std::array<int, 3>> grid;
        for (int j : {1, d - 1}) {
          if (j < 1 || j > d - 1 || n <= d - j) continue;
          for (int k : {j, std::min(j + 1, d), d})
            for (int r : {1, 2, d})
              if (r >= 1 && r <= d && k >= j && k <= d)
                grid.push_back({j, k, r});
        }
        std::sort(grid.begin(), grid.end());
        grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
        for (auto [j, k, r] : grid)
          checks.push_back(check_identity_73(arr, j, k, r, {}, inner, rng));
      }

      for (int k = 1; k <= std::min<long long>(d, n); ++k)
        checks.push_back(check_tiling_CE1(arr, k, inner, rng));
    } catch (const GeneralPositionError& e) {
      std::string path = arr ? dump_triage(*arr) : std::string();
      throw HardAssertionError(e.what(), path);
    }
    all[a] = std::move(checks);
    resamples += local_resamples;
  });

  // Keep the worst instance of each named check across arrangements.
  std::map<std::string, IdentityCheckResult> worst;
  for (const auto& checks : all) {
    for (const auto& c : checks) {
      auto it = worst.find(c.name);
      double badness = c.tolerance > 0 ? c.residual / c.tolerance : 0.0;
      if (it == worst.end() ||
          badness > (it->second.tolerance > 0
                         ? it->second.residual / it->second.tolerance
                         : 0.0))
        worst[c.name] = c;
    }
  }
  ExperimentReport report;
  report.config.d = d;
  report.config.n = n;
  report.config.replicates = arrangements;
  report.config.inner_mc_samples = inner;
  report.config.master_seed = seed;
  report.config.workers = workers;
  report.config.functionals = {"identities"};
  report.seed = seed;
  report.resamples = resamples.load();
  for (const auto& [name, c] : worst) {
    FunctionalRecord rec;
    rec.name = name;
    rec.estimate = c.lhs;
    rec.se = c.tolerance / 4;
    rec.exact = c.rhs;
    rec.exact_err = 0;
    rec.z = rec.se > 0 ? (c.lhs - c.rhs) / rec.se : 0.0;
    rec.pass = c.pass;
    report.results.push_back(rec);
  }
  report.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
          .count();
  return report;
}

// --- serialization ---

namespace {

json to_json(const DirectionDistribution& dist) {
  json out;
  out["kind"] = dist.is_isotropic() ? "isotropic" : "anisotropic_gaussian";
  json scales = json::array();
  for (int i = 0; i < dist.scales.size(); ++i) scales.push_back(dist.scales(i));
  out["scales"] = scales;
  return out;
}

DirectionDistribution distribution_from_json(const json& j) {
  DirectionDistribution dist;
  std::string kind = j.value("kind", "isotropic");
  if (kind == "isotropic") return dist;
  if (kind != "anisotropic_gaussian") throw ConfigError("unknown distribution kind");
  auto scales = j.at("scales");
  Eigen::VectorXd s(scales.size());
  for (size_t i = 0; i < scales.size(); ++i) s(static_cast<int>(i)) = scales[i];
  return DirectionDistribution::anisotropic(s);
}

json to_json(const ExperimentConfig& cfg) {
  json out;
  out["d"] = cfg.d;
  out["n"] = cfg.n;
  out["model"] = to_string(cfg.model);
  out["k"] = cfg.k;
  out["j"] = cfg.j;
  out["replicates"] = cfg.replicates;
  out["inner_mc_samples"] = cfg.inner_mc_samples;
  out["distribution"] = to_json(cfg.distribution);
  out["master_seed"] = cfg.master_seed;
  out["functionals"] = cfg.functionals;
  out["sigma_gate"] = cfg.sigma_gate;
  return out;
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig cfg;
  cfg.d = j.value("d", cfg.d);
  cfg.n = j.value("n", cfg.n);
  if (j.contains("model")) cfg.model = cone_model_from_string(j["model"]);
  cfg.k = j.value("k", cfg.k);
  cfg.j = j.value("j", cfg.j);
  cfg.replicates = j.value("replicates", cfg.replicates);
  cfg.inner_mc_samples = j.value("inner_mc_samples", cfg.inner_mc_samples);
  if (j.contains("distribution"))
    cfg.distribution = distribution_from_json(j["distribution"]);
  cfg.master_seed = j.value("master_seed", cfg.master_seed);
  if (j.contains("functionals"))
    cfg.functionals = j["functionals"].get<std::vector<std::string>>();
  cfg.sigma_gate = j.value("sigma_gate", cfg.sigma_gate);
  return cfg;
}

json to_json(const ExperimentReport& report, bool canonical) {
  json out;
  out["schema_version"] = report.schema_version;
  out["config"] = to_json(report.config);
  json results = json::array();
  for (const auto& r : report.results) {
    json rec;
    rec["name"] = r.name;
    rec["estimate"] = r.estimate;
    rec["se"] = r.se;
    rec["exact"] = r.exact;
    rec["exact_err"] = r.exact_err;
    rec["z"] = r.z;
    rec["pass"] = r.pass;
    results.push_back(rec);
  }
  out["results"] = results;
  out["hard_assertion_failures"] = report.hard_assertion_failures;
  out["wall_time_ms"] = canonical ? 0.0 : report.wall_time_ms;
  out["resamples"] = report.resamples;
  out["seed"] = report.seed;
  return out;
}

}  // namespace

void write_report(const ExperimentReport& report, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("write_report: cannot open " + path);
  f << to_json(report, false).dump(2) << "\n";
}

ExperimentReport read_report(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("read_report: cannot open " + path);
  json j = json::parse(f);
  if (j.at("schema_version").get<int>() != 1)
    throw std::runtime_error("read_report: unsupported schema version");
  ExperimentReport report;
  report.schema_version = j["schema_version"];
  report.config = config_from_json(j.at("config"));
  for (const auto& rec : j.at("results")) {
    FunctionalRecord r;
    r.name = rec.at("name");
    r.estimate = rec.at("estimate");
    r.se = rec.at("se");
    r.exact = rec.at("exact");
    r.exact_err = rec.at("exact_err");
    r.z = rec.at("z");
    r.pass = rec.at("pass");
    report.results.push_back(r);
  }
  report.hard_assertion_failures = j.value("hard_assertion_failures", 0ll);
  report.wall_time_ms = j.value("wall_time_ms", 0.0);
  report.resamples = j.value("resamples", 0ll);
  report.seed = j.value("seed", 0ull);
  return report;
}

void write_csv(const ExperimentReport& report, const std::string& path) {
  std::ofstream f(path, std::ios::binary);  // LF endings on every platform
  if (!f) throw std::runtime_error("write_csv: cannot open " + path);
  f << "name,estimate,se,exact,exact_err,z,pass\n";
  char buf[512];
  for (const auto& r : report.results) {
    std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%s\n",
                  r.name.c_str(), r.estimate, r.se, r.exact, r.exact_err, r.z,
                  r.pass ? "true" : "false");
    f << buf;
  }
}

std::string to_canonical_json(const ExperimentReport& report) {
  return to_json(report, true).dump(2);
}

ExperimentConfig config_from_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config file not found: " + path);
  return config_from_json(json::parse(f));
}

}  // namespace conetess
