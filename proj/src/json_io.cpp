#include "bicbandit/json_io.hpp"

#include <cmath>
#include <sstream>

#include "bicbandit/errors.hpp"

namespace bic {

namespace {

Json finite_or_string(double v) {
  if (std::isinf(v)) return Json(v > 0 ? "inf" : "-inf");
  return Json(v);
}

}  // namespace

Json prior_to_json(const ArmPrior& p) {
  Json j;
  if (p.is_beta()) {
    j["kind"] = "beta";
    j["a"] = p.a();
    j["b"] = p.b();
  } else {
    j["kind"] = "atoms";
    Json support = Json::array();
    for (const Atom& a : p.support()) support.push_back({a.value, a.prob});
    j["support"] = support;
  }
  return j;
}

ArmPrior prior_from_json(const Json& j) {
  require(j.is_object() && j.contains("kind"), ErrorKind::Validation,
          "prior document needs a \"kind\" field");
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "beta") {
    return ArmPrior::beta(j.at("a").get<double>(), j.at("b").get<double>());
  }
  if (kind == "atoms") {
    std::vector<Atom> atoms;
    for (const Json& row : j.at("support")) {
      require(row.is_array() && row.size() == 2, ErrorKind::Validation,
              "atom entries must be [value, prob] pairs");
      atoms.push_back({row[0].get<double>(), row[1].get<double>()});
    }
    return ArmPrior::atoms(std::move(atoms));
  }
  fail(ErrorKind::Validation, "unknown prior kind: " + kind);
}

Json instance_to_json(const ProblemInstance& inst) {
  Json arms = Json::array();
  for (const ArmPrior& p : inst.arms()) arms.push_back(prior_to_json(p));
  return Json{{"arms", arms}};
}

ProblemInstance instance_from_json(const Json& j) {
  require(j.is_object() && j.contains("arms"), ErrorKind::Validation,
          "instance document needs an \"arms\" array");
  std::vector<ArmPrior> arms;
  for (const Json& a : j.at("arms")) arms.push_back(prior_from_json(a));
  return ProblemInstance::of(std::move(arms));
}

Json params_to_json(const PriorParams& p) {
  Json j;
  j["K"] = p.K;
  j["c_ts"] = p.c_ts;
  j["c_pad"] = p.c_pad;
  j["eps_ts"] = p.eps_ts;
  j["delta_ts"] = p.delta_ts;
  j["n_ts"] = p.n_ts;
  j["g_pad"] = finite_or_string(p.g_pad);
  j["n_pad"] = p.n_pad;
  j["lambda"] = p.lambda;
  if (p.n_boot_infinite)
    j["n_boot"] = "inf";
  else
    j["n_boot"] = p.n_boot;
  j["p_boot"] = p.p_boot;
  j["zeros_prob"] = p.zeros_prob;
  j["delta_easy"] = p.delta_easy;
  if (p.g_pad_witness_arm >= 0) {
    j["g_pad_witness"] = Json{{"arm", p.g_pad_witness_arm}, {"q", p.g_pad_witness_q}};
  }
  return j;
}

Json lower_bound_to_json(const LowerBoundReport& rep) {
  Json j;
  j["main_lb"] = rep.infinite ? Json("inf") : Json(rep.main_lb);
  j["infinite"] = rep.infinite;
  j["components"] = Json{{"K", rep.k_component},
                         {"n_boot", rep.n_boot_component < 0 ? Json("inf") : Json(rep.n_boot_component)},
                         {"ratio", rep.ratio_component < 0 ? Json("inf") : Json(rep.ratio_component)}};
  j["witness_arm"] = rep.witness_arm;
  j["witness_q"] = rep.witness_q;
  return j;
}

Json explorability_to_json(const ExplorabilityReport& rep) {
  Json arms = Json::array();
  for (const auto& v : rep.arms) {
    const char* reason = "explorable";
    switch (v.reason) {
      case ExplorabilityReport::Reason::Explorable: reason = "explorable"; break;
      case ExplorabilityReport::Reason::Dominated: reason = "dominated"; break;
      case ExplorabilityReport::Reason::NonDominantEdge: reason = "non-dominant-edge"; break;
      case ExplorabilityReport::Reason::SupportDegenerateEdge:
        reason = "support-degenerate-edge";
        break;
    }
    arms.push_back(Json{{"explorable", v.explorable}, {"reason", reason}});
  }
  return Json{{"arms", arms}, {"n_seq", rep.n_seq}, {"first_failing", rep.first_failing}};
}

Json schedule_to_json(const PhaseSchedule& s) {
  Json j;
  const char* alg = s.alg == Algorithm::Alg1 ? "alg1" : (s.alg == Algorithm::Alg2 ? "alg2" : "alg3");
  j["algorithm"] = alg;
  j["K"] = s.K;
  j["N"] = s.N;
  j["N0"] = s.N0;
  j["lambda"] = s.lambda;
  j["n_lambda"] = s.n_lambda;
  j["total_rounds"] = s.total_rounds;
  Json phases = Json::array();
  for (const Phase& p : s.phases) {
    const char* kind = "explore";
    switch (p.kind) {
      case Phase::Kind::Explore: kind = "explore"; break;
      case Phase::Kind::Exploit: kind = "exploit"; break;
      case Phase::Kind::Alg1Boot: kind = "boot"; break;
      case Phase::Kind::Alg3ZerosExplore: kind = "zeros-explore"; break;
      case Phase::Kind::Alg3Boot: kind = "boot"; break;
      case Phase::Kind::Grow: kind = "grow"; break;
      case Phase::Kind::FinalSlot: kind = "final-slot"; break;
    }
    Json pj{{"kind", kind}, {"len", p.length}, {"label", p.label}};
    if (p.arm != -1) pj["arm"] = p.arm;
    if (p.depth > 0) pj["depth"] = p.depth;
    if (p.zeros_n0 > 0) pj["zeros_n0"] = p.zeros_n0;
    if (p.coin > 0) pj["coin"] = p.coin;
    if (p.recorded_p > 0) pj["p"] = p.recorded_p;
    if (p.group >= 0) pj["group"] = p.group;
    if (p.slot >= 0) pj["slot"] = p.slot;
    phases.push_back(std::move(pj));
  }
  j["phases"] = phases;
  return j;
}

Json policy_to_json(const PaddedPolicy& p, i64 table_cap) {
  Json j;
  j["arm"] = p.arm;
  j["depth"] = p.depth;
  j["zeros_depth"] = p.zeros_depth;
  j["exploit_on_abstain"] = p.exploit_on_abstain;
  j["method"] = p.meta.method;
  if (!std::isnan(p.meta.lambda_achieved)) j["lambda_achieved"] = p.meta.lambda_achieved;
  if (!p.meta.q_star.empty()) j["q_star"] = p.meta.q_star;
  j["seed"] = p.meta.seed;
  double sz = 1;
  for (int i = 0; i <= p.arm; ++i) sz *= double(p.depth + 1);
  if (sz <= double(table_cap)) {
    Json rows = Json::array();
    std::vector<double> table = p.table(table_cap);
    std::vector<i64> counts(std::size_t(p.arm) + 1, 0);
    for (double prob : table) {
      rows.push_back(Json{{"counts", counts}, {"p", prob}});
      for (int i = 0; i <= p.arm; ++i) {
        if (++counts[std::size_t(i)] <= p.depth) break;
        counts[std::size_t(i)] = 0;
      }
    }
    j["table"] = rows;
  }
  return j;
}

std::string bic_report_csv(const BICReport& rep) {
  std::ostringstream out;
  out.precision(17);
  out << "t,k,j,margin,se,method,samples\n";
  const char* method = rep.exact ? "exact" : "mc";
  for (const BICEntry& e : rep.entries) {
    out << e.t << ',' << e.k << ',' << e.j << ',' << e.margin << ',' << e.se << ',' << method
        << ',' << rep.samples << '\n';
  }
  return out.str();
}

std::string trace_csv(const RunTrace& trace, const PhaseSchedule* sched) {
  std::ostringstream out;
  out.precision(17);
  out << "t,phase,label,arm,reward\n";
  for (const TraceRow& r : trace.rows) {
    const char* label = "thompson";
    if (r.phase >= 0 && sched != nullptr) label = sched->phases[std::size_t(r.phase)].label.c_str();
    out << r.t << ',' << r.phase << ',' << label << ',' << r.arm << ',' << r.reward << '\n';
  }
  return out.str();
}

}  // namespace bic
