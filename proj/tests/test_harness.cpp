#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "bicbandit/errors.hpp"
#include "bicbandit/harness.hpp"

using namespace bic;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json minimal_config(const std::string& out_dir) {
  Json cfg;
  cfg["instance"] = Json{{"arms", Json::array({Json{{"kind", "beta"}, {"a", 1.0}, {"b", 1.0}},
                                               Json{{"kind", "beta"}, {"a", 1.0}, {"b", 1.0}}})}};
  cfg["algorithm"] = "alg1";
  cfg["N"] = 1;
  cfg["seed"] = 7;
  cfg["replicas"] = 20;
  cfg["overrides"] = Json{{"c_pad", 0.01}, {"c_ts", 0.02}};
  if (!out_dir.empty()) cfg["out"] = out_dir;
  return cfg;
}

}  // namespace

TEST_CASE("prior and instance round-trip through json") {
  Json j = Json::parse(R"({"kind":"beta","a":2.5,"b":3.0})");
  ArmPrior p = prior_from_json(j);
  CHECK(p.is_beta());
  CHECK(prior_to_json(p) == j);

  Json atoms = Json::parse(R"({"kind":"atoms","support":[[0.2,0.5],[0.8,0.5]]})");
  ArmPrior q = prior_from_json(atoms);
  CHECK_FALSE(q.is_beta());
  CHECK(prior_to_json(q) == atoms);

  CHECK_THROWS(prior_from_json(Json::parse(R"({"kind":"gamma"})")));
  CHECK_THROWS(instance_from_json(Json::parse(R"({"arms":[]})")));
}

TEST_CASE("run_experiment writes the full artifact set") {
  // with c_pad = 0.01 the Alg1 floor collapses to 1, so N = 1 runs
  fs::path dir = fs::temp_directory_path() / "bic_harness_test";
  fs::remove_all(dir);
  Json cfg = minimal_config(dir.string());
  ExperimentResult res = run_experiment(config_from_json(cfg));
  CHECK(res.audit_pass);
  CHECK(fs::exists(dir / "params.json"));
  CHECK(fs::exists(dir / "schedule.json"));
  CHECK(fs::exists(dir / "summary.json"));
  CHECK(fs::exists(dir / "traces" / "run_0.csv"));
  Json summary = Json::parse(slurp(dir / "summary.json"));
  CHECK(summary["pull_counts"]["runs_with_full_N"] == 20);
  CHECK(summary["pull_counts"]["min"][0].get<i64>() >= 1);

  // rerunning the identical config gives byte-identical output
  std::string first = slurp(dir / "summary.json");
  run_experiment(config_from_json(cfg));
  CHECK(slurp(dir / "summary.json") == first);
  std::string trace_first = slurp(dir / "traces" / "run_0.csv");
  run_experiment(config_from_json(cfg));
  CHECK(slurp(dir / "traces" / "run_0.csv") == trace_first);
  fs::remove_all(dir);
}

TEST_CASE("invalid prior yields one structured error and no artifacts") {
  fs::path dir = fs::temp_directory_path() / "bic_harness_bad";
  fs::remove_all(dir);
  Json cfg = minimal_config(dir.string());
  cfg["instance"]["arms"][0]["a"] = -1.0;
  CHECK_THROWS_AS(run_experiment(config_from_json(cfg)), Error);
  CHECK_FALSE(fs::exists(dir / "summary.json"));
  CHECK_FALSE(fs::exists(dir / "params.json"));
  fs::remove_all(dir);
}

TEST_CASE("audit mode mc produces a bic block and respects the floor") {
  Json cfg = minimal_config("");
  cfg["audit"] = Json{{"mode", "mc"}, {"replicas", 500}, {"margin_floor", -1e-9}};
  ExperimentResult res = run_experiment(config_from_json(cfg));
  REQUIRE(res.summary.contains("bic"));
  CHECK(res.summary["bic"].contains("min_margin"));
  // an absurd floor fails the audit
  cfg["audit"]["margin_floor"] = 0.5;
  ExperimentResult res2 = run_experiment(config_from_json(cfg));
  CHECK_FALSE(res2.audit_pass);
}

TEST_CASE("sweep over M reproduces n_boot = M^2") {
  Json cfg;
  cfg["family"] = Json{{"kind", "beta_pair"}};
  cfg["algorithm"] = "alg1";
  cfg["N"] = 1;
  std::vector<Json> values{2, 3, 4, 5};
  std::string csv = sweep_csv(cfg, "M", values);
  std::istringstream lines(csv);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "axis,value,K,rounds_budget,main_lb,n_boot,g_pad,n_ts,error");
  std::vector<i64> expect{4, 9, 16, 25};
  for (int i = 0; i < 4; ++i) {
    std::string line;
    REQUIRE(std::getline(lines, line));
    // n_boot is the 6th column
    std::istringstream cells(line);
    std::string cell;
    for (int c = 0; c < 6; ++c) std::getline(cells, cell, ',');
    CHECK(std::stoll(cell) == expect[std::size_t(i)]);
  }
}

TEST_CASE("sweep over K is monotone in the budget and survives cell failures") {
  Json cfg;
  cfg["family"] = Json{{"kind", "iid"},
                       {"prior", Json{{"kind", "atoms"},
                                      {"support", Json::array({Json::array({0.3, 0.5}),
                                                               Json::array({0.9, 0.5})})}}}};
  cfg["algorithm"] = "alg1";
  cfg["N"] = 1;
  std::vector<Json> values{2, 4, 8};
  std::string csv = sweep_csv(cfg, "K", values);
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);  // header
  i64 prev = 0;
  while (std::getline(lines, line)) {
    std::istringstream cells(line);
    std::string cell;
    for (int c = 0; c < 4; ++c) std::getline(cells, cell, ',');
    i64 budget = std::stoll(cell);
    CHECK(budget > prev);
    prev = budget;
  }

  // a failing cell is recorded in-row, and the sweep continues
  Json bad;
  bad["family"] = Json{{"kind", "iid"},
                       {"prior", Json{{"kind", "atoms"},
                                      {"support", Json::array({Json::array({0.5, 1.0})})}}}};
  std::string csv2 = sweep_csv(bad, "K", {Json(2), Json(3)});
  CHECK(csv2.find("not explorable") != std::string::npos);
}

TEST_CASE("sweep over N grows at least linearly for alg1") {
  Json cfg;
  cfg["instance"] = Json{{"arms", Json::array({Json{{"kind", "atoms"},
                                                    {"support", Json::array({Json::array({0.3, 0.5}),
                                                                             Json::array({0.9, 0.5})})}},
                                               Json{{"kind", "atoms"},
                                                    {"support", Json::array({Json::array({0.2, 0.5}),
                                                                             Json::array({0.8, 0.5})})}}})}};
  cfg["algorithm"] = "alg1";
  cfg["overrides"] = Json{{"c_pad", 0.01}};  // keep the floor below the swept N values
  std::string csv = sweep_csv(cfg, "N", {Json(8), Json(16), Json(32)});
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  std::vector<i64> budgets;
  while (std::getline(lines, line)) {
    std::istringstream cells(line);
    std::string cell;
    for (int c = 0; c < 4; ++c) std::getline(cells, cell, ',');
    budgets.push_back(std::stoll(cell));
  }
  REQUIRE(budgets.size() == 3);
  CHECK(budgets[1] - budgets[0] >= 8);   // at least the N-linear term
  CHECK(budgets[2] - budgets[1] >= 16);
}

TEST_CASE("ts and ts-warm modes run and are audited") {
  Json cfg = minimal_config("");
  cfg["algorithm"] = "ts";
  cfg["horizon"] = 5;
  cfg["audit"] = Json{{"mode", "mc"}, {"replicas", 300}};
  ExperimentResult res = run_experiment(config_from_json(cfg));
  CHECK(res.summary["total_rounds"] == 5);

  cfg["algorithm"] = "ts-warm";
  cfg["N"] = 2;
  cfg["horizon"] = 8;
  ExperimentResult res2 = run_experiment(config_from_json(cfg));
  CHECK(res2.summary["total_rounds"] == 8);
  CHECK(res2.summary["pull_counts"]["min"][0].get<i64>() >= 2);
}
