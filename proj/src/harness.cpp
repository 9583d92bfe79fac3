#include "bicbandit/harness.hpp"

#include <filesystem>
#include <fstream>

#include "bicbandit/errors.hpp"
#include "bicbandit/parallel.hpp"

#ifndef BICBANDIT_VERSION
#define BICBANDIT_VERSION "0.0.0"
#endif

namespace bic {

namespace fs = std::filesystem;

namespace {

std::uint64_t replica_seed(std::uint64_t master, i64 rep) {
  return Rng::mix64(master ^ Rng::mix64(std::uint64_t(rep) + 17));
}

struct OutputGuard {
  std::vector<fs::path> written;
  bool armed = true;
  void add(const fs::path& p) { written.push_back(p); }
  ~OutputGuard() {
    if (!armed) return;
    std::error_code ec;
    for (const fs::path& p : written) fs::remove(p, ec);
  }
};

void write_file(OutputGuard& guard, const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  require(out.good(), ErrorKind::Validation, "cannot write " + p.string());
  out << content;
  out.close();
  require(out.good(), ErrorKind::Validation, "write failed for " + p.string());
  guard.add(p);
}

Algorithm algo_from_string(const std::string& s) {
  if (s == "alg1") return Algorithm::Alg1;
  if (s == "alg2") return Algorithm::Alg2;
  if (s == "alg3") return Algorithm::Alg3;
  fail(ErrorKind::Validation, "unknown algorithm: " + s);
}

ProblemInstance load_instance(const Json& spec) {
  if (spec.is_object() && spec.contains("path")) {
    std::string path = spec.at("path").get<std::string>();
    std::ifstream in(path);
    require(in.good(), ErrorKind::Validation, "cannot read instance file: " + path);
    Json j = Json::parse(in, nullptr, true, true);
    return instance_from_json(j);
  }
  return instance_from_json(spec);
}

}  // namespace

ExperimentConfig config_from_json(const Json& j) {
  ExperimentConfig cfg;
  require(j.is_object() && j.contains("instance"), ErrorKind::Validation,
          "config needs an \"instance\" field");
  cfg.instance = j.at("instance");
  if (j.contains("algorithm")) cfg.algorithm = j.at("algorithm").get<std::string>();
  if (j.contains("N")) cfg.N = j.at("N").get<i64>();
  if (j.contains("horizon")) cfg.horizon = j.at("horizon").get<i64>();
  if (j.contains("seed")) cfg.master_seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("replicas")) cfg.replicas = j.at("replicas").get<i64>();
  require(cfg.replicas >= 1, ErrorKind::Validation, "replicas must be >= 1");
  if (j.contains("overrides")) {
    const Json& ov = j.at("overrides");
    if (ov.contains("c_ts")) cfg.overrides.c_ts = ov.at("c_ts").get<double>();
    if (ov.contains("c_pad")) cfg.overrides.c_pad = ov.at("c_pad").get<double>();
    if (ov.contains("lambda")) cfg.overrides.lambda = ov.at("lambda").get<double>();
    if (ov.contains("n_cap")) cfg.overrides.n_cap = ov.at("n_cap").get<i64>();
    if (ov.contains("beta_grid")) cfg.compute.beta_grid = ov.at("beta_grid").get<int>();
    if (ov.contains("subgrad_iters"))
      cfg.compute.subgrad_iters = ov.at("subgrad_iters").get<int>();
    require(cfg.overrides.c_ts > 0 && cfg.overrides.c_pad > 0, ErrorKind::Validation,
            "constant overrides must be positive");
  }
  cfg.compute.n_cap = cfg.overrides.n_cap;
  if (j.contains("audit")) {
    const Json& a = j.at("audit");
    if (a.contains("mode")) cfg.audit_mode = a.at("mode").get<std::string>();
    if (a.contains("replicas")) cfg.audit_replicas = a.at("replicas").get<i64>();
    if (a.contains("margin_floor")) cfg.margin_floor = a.at("margin_floor").get<double>();
  }
  if (j.contains("out")) cfg.out_dir = j.at("out").get<std::string>();
  if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
  if (j.contains("trace_limit")) cfg.trace_limit = j.at("trace_limit").get<int>();
  return cfg;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  ProblemInstance inst = load_instance(cfg.instance);
  PriorParams params = compute_prior_params(inst, cfg.overrides, cfg.compute);

  PhaseSchedule sched;
  RunSpec spec;
  bool has_schedule = true;
  if (cfg.algorithm == "ts") {
    require(cfg.horizon > 0, ErrorKind::Validation, "ts mode needs a positive horizon");
    spec.mode = RunSpec::Mode::ThompsonOnly;
    spec.horizon = cfg.horizon;
    has_schedule = false;
  } else if (cfg.algorithm == "ts-warm") {
    sched = warmstart_schedule(inst, cfg.N);
    require(cfg.horizon >= sched.total_rounds, ErrorKind::Validation,
            "ts-warm horizon must cover the warm-start schedule");
    spec.mode = RunSpec::Mode::WarmStartThompson;
    spec.schedule = &sched;
    spec.horizon = cfg.horizon;
  } else {
    ScheduleOptions sopt;
    sched = build_schedule(inst, params, cfg.N, algo_from_string(cfg.algorithm), sopt);
    spec.mode = RunSpec::Mode::Schedule;
    spec.schedule = &sched;
    spec.horizon = sched.total_rounds;
  }

  int K = inst.K();
  i64 horizon = spec.horizon;
  std::vector<i64> min_pulls(std::size_t(K), std::numeric_limits<i64>::max());
  std::vector<double> mean_pulls(std::size_t(K), 0.0);
  double regret_sum = 0;
  i64 runs_with_full_n = 0;
  std::vector<std::string> trace_files;

  for (i64 rep = 0; rep < cfg.replicas; ++rep) {
    RunTrace tr = run_algorithm(inst, spec, replica_seed(cfg.master_seed, rep));
    require(i64(tr.rows.size()) == horizon, ErrorKind::Internal,
            "trace length disagrees with the horizon");
    bool full = true;
    for (int i = 0; i < K; ++i) {
      min_pulls[std::size_t(i)] = std::min(min_pulls[std::size_t(i)], tr.pulls[std::size_t(i)]);
      mean_pulls[std::size_t(i)] += double(tr.pulls[std::size_t(i)]) / double(cfg.replicas);
      full = full && tr.pulls[std::size_t(i)] >= cfg.N;
    }
    if (full) ++runs_with_full_n;
    regret_sum += tr.regret;
    if (rep < cfg.trace_limit && !cfg.out_dir.empty())
      trace_files.push_back(trace_csv(tr, has_schedule ? &sched : nullptr));
  }

  BICReport audit;
  bool audited = false;
  if (cfg.audit_mode == "mc") {
    audit = bic_margins_mc(inst, spec, cfg.audit_replicas, cfg.master_seed, cfg.threads);
    audited = true;
  } else if (cfg.audit_mode == "exact") {
    std::unique_ptr<BranchModel> model;
    if (spec.mode == RunSpec::Mode::ThompsonOnly) {
      model = thompson_model(inst, cfg.horizon);
    } else {
      require(spec.mode == RunSpec::Mode::Schedule, ErrorKind::Validation,
              "exact audit supports schedule and ts modes");
      model = schedule_model(inst, sched);
    }
    audit = bic_margins_exact(inst, *model);
    audited = true;
  } else {
    require(cfg.audit_mode == "none", ErrorKind::Validation,
            "audit mode must be none|mc|exact");
  }

  ExperimentResult result;
  result.audit_pass = !audited || audit.min_margin() >= cfg.margin_floor;

  Json summary;
  summary["version"] = BICBANDIT_VERSION;
  summary["config"] = Json{{"algorithm", cfg.algorithm},
                           {"N", cfg.N},
                           {"horizon", cfg.horizon},
                           {"seed", cfg.master_seed},
                           {"replicas", cfg.replicas},
                           {"audit_mode", cfg.audit_mode}};
  summary["instance"] = instance_to_json(inst);
  summary["total_rounds"] = horizon;
  summary["pull_counts"] =
      Json{{"min", min_pulls}, {"mean", mean_pulls}, {"runs_with_full_N", runs_with_full_n}};
  summary["bayes_regret_mean"] = regret_sum / double(cfg.replicas);
  if (audited)
    summary["bic"] = Json{{"min_margin", audit.min_margin()},
                          {"floor", cfg.margin_floor},
                          {"pass", result.audit_pass}};
  result.summary = summary;

  if (!cfg.out_dir.empty()) {
    OutputGuard guard;
    fs::create_directories(fs::path(cfg.out_dir) / "traces");
    write_file(guard, fs::path(cfg.out_dir) / "params.json", params_to_json(params).dump(2) + "\n");
    if (has_schedule)
      write_file(guard, fs::path(cfg.out_dir) / "schedule.json",
                 schedule_to_json(sched).dump(2) + "\n");
    for (std::size_t r = 0; r < trace_files.size(); ++r)
      write_file(guard, fs::path(cfg.out_dir) / "traces" / ("run_" + std::to_string(r) + ".csv"),
                 trace_files[r]);
    if (audited)
      write_file(guard, fs::path(cfg.out_dir) / "bic_report.csv", bic_report_csv(audit));
    write_file(guard, fs::path(cfg.out_dir) / "summary.json", summary.dump(2) + "\n");
    guard.armed = false;  // success: keep everything
  }
  return result;
}

namespace {

ProblemInstance family_instance(const Json& family, const std::string& axis, const Json& value,
                                int K_default) {
  std::string kind = family.value("kind", "iid");
  int K = K_default;
  if (axis == "K") K = value.get<int>();
  if (kind == "iid") {
    ArmPrior p = prior_from_json(family.at("prior"));
    return ProblemInstance::of(std::vector<ArmPrior>(std::size_t(K), p));
  }
  if (kind == "cycle") {
    std::vector<ArmPrior> pool;
    for (const Json& pj : family.at("priors")) pool.push_back(prior_from_json(pj));
    require(!pool.empty(), ErrorKind::Validation, "cycle family needs priors");
    std::vector<ArmPrior> arms;
    for (int i = 0; i < K; ++i) arms.push_back(pool[std::size_t(i) % pool.size()]);
    return ProblemInstance::of(std::move(arms));
  }
  if (kind == "hard_pair") {
    ArmPrior good = prior_from_json(family.at("good"));
    ArmPrior bad = prior_from_json(family.at("bad"));
    std::vector<ArmPrior> arms(std::size_t(K - 1), good);
    arms.push_back(bad);
    return ProblemInstance::of(std::move(arms));
  }
  if (kind == "beta_pair") {
    require(axis == "M", ErrorKind::Validation, "beta_pair family sweeps M");
    double M = value.get<double>();
    return ProblemInstance::of({ArmPrior::beta(M, 1.0), ArmPrior::beta(1.0, M)});
  }
  if (kind == "gaussian") {
    require(axis == "sigma", ErrorKind::Validation, "gaussian family sweeps sigma");
    double sigma = value.get<double>();
    int grid = family.value("grid", 101);
    std::vector<ArmPrior> arms;
    std::vector<double> nus = family.at("nu").get<std::vector<double>>();
    for (double nu : nus) arms.push_back(discretize_truncated_gaussian(nu, sigma, grid));
    std::sort(arms.begin(), arms.end(), [](const ArmPrior& a, const ArmPrior& b) {
      return a.moments().mean > b.moments().mean;
    });
    return ProblemInstance::of(std::move(arms));
  }
  if (kind == "easy_two_point") {
    require(axis == "delta", ErrorKind::Validation, "easy_two_point family sweeps delta");
    double d = value.get<double>();
    require(d > 0 && d < 1.0 / 7.0, ErrorKind::Validation, "delta out of range for this family");
    ArmPrior p = ArmPrior::atoms({{0.5 - 2 * d, 0.5}, {0.5 + 3 * d, 0.5}});
    return ProblemInstance::of(std::vector<ArmPrior>(std::size_t(K), p));
  }
  fail(ErrorKind::Validation, "unknown family kind: " + kind);
}

}  // namespace

std::string sweep_csv(const Json& base_config, const std::string& axis,
                      const std::vector<Json>& values, int threads) {
  require(axis == "K" || axis == "M" || axis == "N" || axis == "sigma" || axis == "delta",
          ErrorKind::Validation, "axis must be one of K, M, N, sigma, delta");
  Json cfg_json = base_config;
  if (!cfg_json.contains("instance"))
    cfg_json["instance"] = Json{{"arms", Json::array({Json{{"kind", "beta"}, {"a", 1.0}, {"b", 1.0}}})}};
  std::vector<std::string> rows(values.size());
  parallel_chunks(
      i64(values.size()),
      [&](i64 c) {
        const Json& value = values[std::size_t(c)];
        std::ostringstream row;
        row.precision(17);
        row << axis << ',' << value.dump();
        try {
          ExperimentConfig cfg = config_from_json(cfg_json);
          ProblemInstance inst =
              cfg_json.contains("family")
                  ? family_instance(cfg_json.at("family"), axis, value,
                                    int(cfg_json.value("K", 2)))
                  : load_instance(cfg.instance);
          i64 N = (axis == "N") ? value.get<i64>() : cfg.N;
          PriorParams params = compute_prior_params(inst, cfg.overrides, cfg.compute);
          LowerBoundReport lb = lower_bound(inst, cfg.compute);
          Algorithm alg = algo_from_string(cfg.algorithm == "ts" || cfg.algorithm == "ts-warm"
                                               ? "alg1"
                                               : cfg.algorithm);
          i64 budget = rounds_budget_clamped(params, inst.K(), N, alg);
          row << ',' << inst.K() << ',' << budget << ','
              << (lb.infinite ? std::string("inf") : std::to_string(lb.main_lb)) << ','
              << (params.n_boot_infinite ? std::string("inf") : std::to_string(params.n_boot))
              << ',' << params.g_pad << ',' << params.n_ts << ',';
        } catch (const std::exception& e) {
          row << ",,,,,," << '"' << e.what() << '"';
        }
        rows[std::size_t(c)] = row.str();
      },
      threads);
  std::string out = "axis,value,K,rounds_budget,main_lb,n_boot,g_pad,n_ts,error\n";
  for (const std::string& r : rows) out += r + "\n";
  return out;
}

}  // namespace bic
