#pragma once

#include "bicbandit/json_io.hpp"

namespace bic {

struct ExperimentConfig {
  Json instance;  // inline instance document, or {"path": "file.json"}
  std::string algorithm = "alg1";  // alg1 | alg2 | alg3 | ts | ts-warm
  i64 N = 1;
  i64 horizon = 0;  // 0: the schedule length (required > 0 for ts modes)
  std::uint64_t master_seed = 1;
  i64 replicas = 100;
  ParamOverrides overrides;
  ComputeOptions compute;
  std::string audit_mode = "none";  // none | mc | exact
  i64 audit_replicas = 10000;
  double margin_floor = -1e-9;
  std::string out_dir;  // empty: keep everything in memory
  int threads = 0;
  int trace_limit = 16;  // replica traces written to disk
};

ExperimentConfig config_from_json(const Json& j);

struct ExperimentResult {
  Json summary;
  bool audit_pass = true;
};

// Computes parameters, builds the schedule, executes the seeded replicas,
// audits per the config and writes params.json / schedule.json / traces/*.csv
// / bic_report.csv / summary.json under out_dir. Partial outputs are removed
// if anything fails. Byte-identical outputs for identical (config, seeds).
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// One row per axis value with the headline parameters; failures are recorded
// in-row and the sweep continues.
std::string sweep_csv(const Json& base_config, const std::string& axis,
                      const std::vector<Json>& values, int threads = 0);

}  // namespace bic
