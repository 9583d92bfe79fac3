// Command-line front end; all functionality goes through the C API.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "bicbandit.h"

namespace {

using nlohmann::json;

int status_to_exit(bic_status st) {
  switch (st) {
    case BIC_OK: return 0;
    case BIC_EINVAL: return 2;
    case BIC_EAUDIT: return 3;
    default: return 1;
  }
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) {
    std::cerr << "error: cannot read " << path << "\n";
    std::exit(2);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json load_config(const std::string& path) {
  try {
    return json::parse(slurp(path), nullptr, true, true);  // allow comments
  } catch (const std::exception& e) {
    std::cerr << "error: bad config: " << e.what() << "\n";
    std::exit(2);
  }
}

void emit(const std::string& content, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out.good()) {
    std::cerr << "error: cannot write " << out_path << "\n";
    std::exit(2);
  }
  out << content;
}

int fail_with(bic_status st) {
  std::cerr << "error: " << bic_last_error() << "\n";
  return status_to_exit(st);
}

struct Owned {
  char* s = nullptr;
  ~Owned() { bic_string_free(s); }
};

bic_instance* instance_from_config(const json& cfg) {
  if (!cfg.contains("instance")) {
    std::cerr << "error: config needs an \"instance\" field\n";
    std::exit(2);
  }
  json spec = cfg.at("instance");
  if (spec.is_object() && spec.contains("path"))
    spec = json::parse(slurp(spec.at("path").get<std::string>()), nullptr, true, true);
  bic_instance* inst = nullptr;
  bic_status st = bic_instance_parse(spec.dump().c_str(), &inst);
  if (st != BIC_OK) {
    std::cerr << "error: " << bic_last_error() << "\n";
    std::exit(status_to_exit(st));
  }
  return inst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"BIC bandit algorithms: parameters, schedules, runs, and incentive audits"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 0;
  app.add_option("--config", config_path, "JSON config file")->required();
  app.add_option("--out", out_dir, "output directory (or file for document commands)");
  app.add_option("--seed", seed, "master seed override")->each([&](const std::string&) {
    seed_set = true;
  });
  app.add_option("--threads", threads, "worker threads (0 = hardware)");

  auto* cmd_params = app.add_subcommand("params", "compute prior-dependent parameters");
  auto* cmd_run = app.add_subcommand("run", "run the configured experiment");
  auto* cmd_audit = app.add_subcommand("audit", "audit BIC margins against the floor");
  auto* cmd_game = app.add_subcommand("game-solve", "solve the (j,N)-recommendation game");
  auto* cmd_explore = app.add_subcommand("explore-set", "classify explorable arms");
  auto* cmd_sweep = app.add_subcommand("sweep", "sweep one parameter axis");

  int game_arm = 1;
  std::int64_t game_depth = 1;
  cmd_game->add_option("--arm", game_arm, "arm j (0-based)");
  cmd_game->add_option("--depth", game_depth, "samples per arm the policy reads");

  std::string axis = "K";
  std::string values_json = "[]";
  cmd_sweep->add_option("--axis", axis, "one of K, M, N, sigma, delta");
  cmd_sweep->add_option("--values", values_json, "JSON array of axis values");

  CLI11_PARSE(app, argc, argv);
  json cfg = load_config(config_path);
  if (seed_set) cfg["seed"] = seed;
  if (threads > 0) cfg["threads"] = threads;
  if (!out_dir.empty() && (cmd_run->parsed())) cfg["out"] = out_dir;

  if (cmd_params->parsed()) {
    bic_instance* inst = instance_from_config(cfg);
    json options = cfg.value("overrides", json::object());
    Owned out;
    bic_status st = bic_params_json(inst, options.dump().c_str(), &out.s);
    bic_instance_free(inst);
    if (st != BIC_OK) return fail_with(st);
    emit(out.s, out_dir);
    return 0;
  }
  if (cmd_explore->parsed()) {
    bic_instance* inst = instance_from_config(cfg);
    Owned out;
    bic_status st = bic_explore_set_json(inst, &out.s);
    bic_instance_free(inst);
    if (st != BIC_OK) return fail_with(st);
    emit(out.s, out_dir);
    return 0;
  }
  if (cmd_game->parsed()) {
    bic_instance* inst = instance_from_config(cfg);
    Owned out;
    bic_status st = bic_game_solve_json(inst, game_arm, game_depth, &out.s);
    bic_instance_free(inst);
    if (st != BIC_OK) return fail_with(st);
    emit(out.s, out_dir);
    return 0;
  }
  if (cmd_run->parsed()) {
    Owned out;
    bic_status st = bic_run_experiment(cfg.dump().c_str(), &out.s);
    if (st != BIC_OK && st != BIC_EAUDIT) return fail_with(st);
    if (out.s) std::cout << out.s;
    if (st == BIC_EAUDIT) {
      std::cerr << "audit: a margin fell below the configured floor\n";
      return 3;
    }
    return 0;
  }
  if (cmd_audit->parsed()) {
    Owned out;
    bic_status st = bic_audit_json(cfg.dump().c_str(), &out.s);
    if (st != BIC_OK && st != BIC_EAUDIT) return fail_with(st);
    if (out.s) emit(out.s, out_dir);
    if (st == BIC_EAUDIT) {
      std::cerr << "audit: a margin fell below the configured floor\n";
      return 3;
    }
    std::cerr << "audit: pass\n";
    return 0;
  }
  if (cmd_sweep->parsed()) {
    Owned out;
    bic_status st = bic_sweep_csv(cfg.dump().c_str(), axis.c_str(), values_json.c_str(), &out.s);
    if (st != BIC_OK) return fail_with(st);
    emit(out.s, out_dir);
    return 0;
  }
  return 2;
}
