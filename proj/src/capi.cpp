#include "bicbandit.h"

#include <cstring>
#include <string>

#include "bicbandit/errors.hpp"
#include "bicbandit/harness.hpp"

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

bic_status status_of(const bic::Error& e) {
  switch (e.kind()) {
    case bic::ErrorKind::Validation:
    case bic::ErrorKind::ImpossibleObservation:
    case bic::ErrorKind::NotExplorable:
      return BIC_EINVAL;
    case bic::ErrorKind::TooLarge:
      return BIC_ETOOLARGE;
    case bic::ErrorKind::AuditFailure:
      return BIC_EAUDIT;
    case bic::ErrorKind::Internal:
      return BIC_ERROR;
  }
  return BIC_ERROR;
}

template <typename F>
bic_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return BIC_OK;
  } catch (const bic::Error& e) {
    g_last_error = e.what();
    return status_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return BIC_ERROR;
  }
}

}  // namespace

struct bic_instance_s {
  bic::ProblemInstance inst;
};

extern "C" {

const char* bic_version(void) { return BICBANDIT_VERSION; }

const char* bic_last_error(void) { return g_last_error.c_str(); }

void bic_string_free(char* s) { delete[] s; }

bic_status bic_instance_parse(const char* instance_json, bic_instance** out) {
  return guarded([&] {
    bic::require(instance_json && out, bic::ErrorKind::Validation, "null argument");
    bic::Json j = bic::Json::parse(instance_json);
    *out = new bic_instance_s{bic::instance_from_json(j)};
  });
}

void bic_instance_free(bic_instance* inst) { delete inst; }

int bic_instance_arms(const bic_instance* inst) { return inst ? inst->inst.K() : 0; }

bic_status bic_params_json(const bic_instance* inst, const char* options_json, char** out_json) {
  return guarded([&] {
    bic::require(inst && out_json, bic::ErrorKind::Validation, "null argument");
    bic::ParamOverrides ov;
    bic::ComputeOptions copt;
    if (options_json && *options_json) {
      bic::Json o = bic::Json::parse(options_json);
      if (o.contains("c_ts")) ov.c_ts = o.at("c_ts").get<double>();
      if (o.contains("c_pad")) ov.c_pad = o.at("c_pad").get<double>();
      if (o.contains("lambda")) ov.lambda = o.at("lambda").get<double>();
      if (o.contains("n_cap")) ov.n_cap = o.at("n_cap").get<bic::i64>();
      if (o.contains("beta_grid")) copt.beta_grid = o.at("beta_grid").get<int>();
    }
    copt.n_cap = ov.n_cap;
    bic::PriorParams p = bic::compute_prior_params(inst->inst, ov, copt);
    *out_json = dup_string(bic::params_to_json(p).dump(2) + "\n");
  });
}

bic_status bic_lower_bound_json(const bic_instance* inst, char** out_json) {
  return guarded([&] {
    bic::require(inst && out_json, bic::ErrorKind::Validation, "null argument");
    *out_json = dup_string(bic::lower_bound_to_json(bic::lower_bound(inst->inst)).dump(2) + "\n");
  });
}

bic_status bic_explore_set_json(const bic_instance* inst, char** out_json) {
  return guarded([&] {
    bic::require(inst && out_json, bic::ErrorKind::Validation, "null argument");
    *out_json =
        dup_string(bic::explorability_to_json(bic::explorable_set(inst->inst)).dump(2) + "\n");
  });
}

bic_status bic_game_solve_json(const bic_instance* inst, int arm, int64_t depth,
                               char** out_json) {
  return guarded([&] {
    bic::require(inst && out_json, bic::ErrorKind::Validation, "null argument");
    bic::GameSolution sol = bic::solve_recommendation_game(inst->inst, arm, depth);
    bic::Json j;
    j["value"] = sol.value;
    j["q_star"] = sol.q_star;
    j["policy"] = bic::policy_to_json(sol.policy);
    *out_json = dup_string(j.dump(2) + "\n");
  });
}

bic_status bic_run_experiment(const char* config_json, char** summary_json) {
  bool audit_failed = false;
  bic_status st = guarded([&] {
    bic::require(config_json && summary_json, bic::ErrorKind::Validation, "null argument");
    bic::ExperimentConfig cfg = bic::config_from_json(bic::Json::parse(config_json));
    bic::ExperimentResult res = bic::run_experiment(cfg);
    *summary_json = dup_string(res.summary.dump(2) + "\n");
    audit_failed = !res.audit_pass;
  });
  if (st == BIC_OK && audit_failed) return BIC_EAUDIT;
  return st;
}

bic_status bic_audit_json(const char* config_json, char** out_json) {
  bool audit_failed = false;
  bic_status st = guarded([&] {
    bic::require(config_json && out_json, bic::ErrorKind::Validation, "null argument");
    bic::Json j = bic::Json::parse(config_json);
    if (!j.contains("audit")) j["audit"] = bic::Json{{"mode", "mc"}};
    bic::ExperimentConfig cfg = bic::config_from_json(j);
    if (cfg.audit_mode == "none") cfg.audit_mode = "mc";
    cfg.replicas = 1;  // the audit is the point; a single smoke run suffices
    bic::ExperimentResult res = bic::run_experiment(cfg);
    *out_json = dup_string(res.summary.dump(2) + "\n");
    audit_failed = !res.audit_pass;
  });
  if (st == BIC_OK && audit_failed) return BIC_EAUDIT;
  return st;
}

bic_status bic_sweep_csv(const char* config_json, const char* axis, const char* values_json,
                         char** out_csv) {
  return guarded([&] {
    bic::require(config_json && axis && values_json && out_csv, bic::ErrorKind::Validation,
                 "null argument");
    bic::Json cfg = bic::Json::parse(config_json);
    bic::Json values = bic::Json::parse(values_json);
    bic::require(values.is_array(), bic::ErrorKind::Validation, "values must be a JSON array");
    std::vector<bic::Json> vals(values.begin(), values.end());
    int threads = cfg.value("threads", 0);
    *out_csv = dup_string(bic::sweep_csv(cfg, axis, vals, threads));
  });
}

}  // extern "C"
