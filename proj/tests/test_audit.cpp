#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bicbandit/audit.hpp"

using namespace bic;

namespace {

ProblemInstance equal_mean_pair() {
  // equal prior means, full overlap: Thompson is BIC from round 1
  return ProblemInstance::of({ArmPrior::atoms({{0.2, 0.5}, {0.8, 0.5}}),
                              ArmPrior::atoms({{0.1, 0.5}, {0.9, 0.5}})});
}

ProblemInstance tiny_alg1_instance() {
  return ProblemInstance::of({ArmPrior::atoms({{0.2, 0.5}, {0.8, 0.5}}),
                              ArmPrior::atoms({{0.1, 0.5}, {0.9, 0.5}})});
}

// plays arm `k` at round 2 exactly when the first reward lies in `on`;
// otherwise plays arm 0; round 1 pulls arm 0
class SplitModel : public BranchModel {
 public:
  SplitModel(int k, std::vector<int> on) : k_(k), on_(std::move(on)) {}
  int arms() const override { return 2; }
  i64 horizon() const override { return 2; }
  std::vector<i64> read_depths() const override { return {1}; }
  bool reads_totals() const override { return false; }
  i64 block_len(std::uint64_t) const override { return 1; }
  void expand(std::uint64_t state, const DataView& data, std::vector<Arc>& out) const override {
    if (state == 0) {
      out.push_back({1.0, 0, 1});
      return;
    }
    i64 r1 = data.prefix_successes(0, 1);
    bool fire = false;
    for (int v : on_) fire = fire || (v == r1);
    out.push_back({1.0, fire ? k_ : 0, 2});
  }

 private:
  int k_;
  std::vector<int> on_;
};

// round 1 pulls arm 0; round 2: with probability `mix` play arm `k`,
// otherwise follow the base rule (play k iff the first reward was a failure)
class MixtureModel : public BranchModel {
 public:
  MixtureModel(int k, double mix) : k_(k), mix_(mix) {}
  int arms() const override { return 2; }
  i64 horizon() const override { return 2; }
  std::vector<i64> read_depths() const override { return {1}; }
  bool reads_totals() const override { return false; }
  i64 block_len(std::uint64_t) const override { return 1; }
  void expand(std::uint64_t state, const DataView& data, std::vector<Arc>& out) const override {
    if (state == 0) {
      out.push_back({1.0, 0, 1});
      return;
    }
    i64 r1 = data.prefix_successes(0, 1);
    int base_arm = (r1 == 0) ? k_ : 0;
    if (base_arm == k_) {
      out.push_back({1.0, k_, 2});
    } else {
      out.push_back({mix_, k_, 2});
      out.push_back({1.0 - mix_, base_arm, 2});
    }
  }

 private:
  int k_;
  double mix_;
};

}  // namespace

TEST_CASE("thompson round-1 margins match the prior formula") {
  // at t = 1 the recommendation is independent of mu:
  // margin(k, j) = Pr[A* = k] (mu_k^0 - mu_j^0); equal means give exactly 0
  ProblemInstance inst = equal_mean_pair();
  auto model = thompson_model(inst, 1);
  BICReport rep = bic_margins_exact(inst, *model);
  CHECK(rep.margin_at(0, 0, 1) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(rep.margin_at(0, 1, 0) == doctest::Approx(0.0).epsilon(1e-15));

  ProblemInstance skew = ProblemInstance::of({ArmPrior::atoms({{0.3, 0.5}, {0.9, 0.5}}),
                                              ArmPrior::atoms({{0.2, 0.5}, {0.8, 0.5}})});
  auto m2 = thompson_model(skew, 1);
  BICReport r2 = bic_margins_exact(skew, *m2);
  std::vector<double> win = best_arm_probs(skew.arms());
  double gap = skew.prior_mean(0) - skew.prior_mean(1);
  CHECK(r2.margin_at(0, 0, 1) == doctest::Approx(win[0] * gap).epsilon(1e-12));
  CHECK(r2.margin_at(0, 1, 0) == doctest::Approx(-win[1] * gap).epsilon(1e-12));
}

TEST_CASE("thompson with equal prior means is BIC (exact, horizon 3)") {
  ProblemInstance inst = equal_mean_pair();
  auto model = thompson_model(inst, 3);
  BICReport rep = bic_margins_exact(inst, *model);
  CHECK(rep.min_margin() >= -1e-9);
}

TEST_CASE("alg1 exact margins are nonnegative on a tiny instance") {
  ProblemInstance inst = tiny_alg1_instance();
  ParamOverrides ov;
  ov.c_pad = 0.02;  // keeps n_pad = 1 so N = N0 = 1 is feasible
  PriorParams params = compute_prior_params(inst, ov);
  REQUIRE(params.n_boot == 1);
  REQUIRE(params.n_pad == 1);
  PhaseSchedule sched = build_schedule(inst, params, 1, Algorithm::Alg1);
  auto model = schedule_model(inst, sched);
  BICReport rep = bic_margins_exact(inst, *model);
  CHECK(rep.horizon == sched.total_rounds);
  CHECK(rep.min_margin() >= -1e-9);
}

TEST_CASE("invariant 2 holds exactly") {
  ProblemInstance inst = tiny_alg1_instance();
  ParamOverrides ov;
  ov.c_pad = 0.02;
  PriorParams params = compute_prior_params(inst, ov);
  PhaseSchedule sched = build_schedule(inst, params, 1, Algorithm::Alg1);
  std::vector<Invariant2Row> rows = invariant2_check(inst, sched);
  REQUIRE_FALSE(rows.empty());
  for (const Invariant2Row& r : rows) CHECK(r.max_abs_dev < 1e-12);
}

TEST_CASE("MC margins agree with exact margins within 4 standard errors") {
  ProblemInstance inst = tiny_alg1_instance();
  ParamOverrides ov;
  ov.c_pad = 0.02;
  PriorParams params = compute_prior_params(inst, ov);
  PhaseSchedule sched = build_schedule(inst, params, 1, Algorithm::Alg1);
  auto model = schedule_model(inst, sched);
  BICReport exact = bic_margins_exact(inst, *model);
  RunSpec spec{RunSpec::Mode::Schedule, &sched, 0};
  BICReport mc = bic_margins_mc(inst, spec, 40000, 31337);
  REQUIRE(mc.entries.size() == exact.entries.size());
  for (std::size_t i = 0; i < mc.entries.size(); ++i) {
    double se = std::max(mc.entries[i].se, 1e-9);
    CHECK(std::fabs(mc.entries[i].margin - exact.entries[i].margin) <= 4 * se);
  }
}

TEST_CASE("doubling replicas shrinks the standard error by about sqrt(2)") {
  ProblemInstance inst = equal_mean_pair();
  PhaseSchedule ws = warmstart_schedule(inst, 1);
  RunSpec spec{RunSpec::Mode::WarmStartThompson, &ws, 4};
  BICReport a = bic_margins_mc(inst, spec, 20000, 5);
  BICReport b = bic_margins_mc(inst, spec, 40000, 5);
  // compare pooled SE over the Thompson rounds
  double sa = 0, sb = 0;
  int n = 0;
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    if (a.entries[i].t < 2) continue;
    sa += a.entries[i].se;
    sb += b.entries[i].se;
    ++n;
  }
  REQUIRE(n > 0);
  double ratio = sa / sb;
  CHECK(ratio > std::sqrt(2.0) * 0.8);
  CHECK(ratio < std::sqrt(2.0) * 1.2);
}

TEST_CASE("degenerate point-mass arms have zero margins") {
  ProblemInstance inst =
      ProblemInstance::of({ArmPrior::atoms({{0.5, 1.0}}), ArmPrior::atoms({{0.5, 1.0}})});
  PhaseSchedule ws = warmstart_schedule(inst, 1);
  RunSpec spec{RunSpec::Mode::WarmStartThompson, &ws, 3};
  BICReport rep = bic_margins_mc(inst, spec, 1000, 7);
  for (const BICEntry& e : rep.entries) {
    CHECK(e.margin == doctest::Approx(0.0));
    CHECK(e.se == doctest::Approx(0.0));
  }
}

TEST_CASE("margins are additive over a partition of the play event") {
  ProblemInstance inst = equal_mean_pair();
  SplitModel both(1, {0, 1});
  SplitModel on0(1, {0});
  SplitModel on1(1, {1});
  BICReport rb = bic_margins_exact(inst, both);
  BICReport r0 = bic_margins_exact(inst, on0);
  BICReport r1 = bic_margins_exact(inst, on1);
  CHECK(rb.margin_at(1, 1, 0) ==
        doctest::Approx(r0.margin_at(1, 1, 0) + r1.margin_at(1, 1, 0)).epsilon(1e-12));
}

TEST_CASE("greedy extension keeps the margin above min(partial, 0)") {
  // partial strategy: play arm 1 at round 2 on {r1 = 1}; completing the
  // undefined event with exploitation (arm 0 is posterior-best there since
  // equal prior means and a failure on arm 0 conditions it down... the
  // extension plays arm 0) can only add nonnegative arm-1 margin mass.
  ProblemInstance inst = equal_mean_pair();
  SplitModel partial(1, {1});
  BICReport rep = bic_margins_exact(inst, partial);
  double partial_margin = rep.margin_at(1, 1, 0);
  // the greedy completion on {r1 = 0} plays arm 1 (its posterior mean is
  // higher after a failure on arm 0), adding that event's margin
  SplitModel greedy_completion(1, {0, 1});
  BICReport full = bic_margins_exact(inst, greedy_completion);
  CHECK(full.margin_at(1, 1, 0) >= std::min(partial_margin, 0.0) - 1e-12);
}

TEST_CASE("hidden-exploration mixture stays BIC") {
  // the base rule (play arm 1 iff r1 = 0) is (1, alpha)-BIC on this instance;
  // mixing in always-play-1 with probability alpha/2 keeps all margins >= 0
  ProblemInstance inst = equal_mean_pair();
  SplitModel base(1, {0});
  double alpha = bic_margins_exact(inst, base).margin_at(1, 1, 0);
  REQUIRE(alpha > 0);
  MixtureModel mixed(1, alpha / 2);
  BICReport rep = bic_margins_exact(inst, mixed);
  CHECK(rep.margin_at(1, 1, 0) >= -1e-9);
  CHECK(rep.margin_at(1, 0, 1) >= -1e-9);
}

TEST_CASE("degenerate pair strategy passes the exact audit at eps = 0.2") {
  ProblemInstance inst = degenerate_pair_instance(0.2);
  auto model = degenerate_pair_model(0.2);
  BICReport rep = bic_margins_exact(inst, *model);
  CHECK(rep.horizon == 3);
  CHECK(rep.min_margin() >= -1e-9);
  // both arms are sampled almost surely within the three rounds
  PullCheck pc = almost_sure_pulls(inst, *model, 1);
  CHECK(pc.ok);
}

TEST_CASE("explorability worked examples") {
  {
    ProblemInstance inst = ProblemInstance::of({ArmPrior::atoms({{0.1, 0.5}, {0.9, 0.5}}),
                                                ArmPrior::atoms({{0.2, 0.5}, {0.6, 0.5}}),
                                                ArmPrior::atoms({{0.15, 1.0}})});
    ExplorabilityReport rep = explorable_set(inst);
    CHECK(rep.arms[0].explorable);
    CHECK(rep.arms[1].explorable);
    CHECK_FALSE(rep.arms[2].explorable);
    CHECK(rep.arms[2].reason == ExplorabilityReport::Reason::Dominated);
    CHECK(rep.first_failing == 2);
    CHECK(rep.n_seq[1] == doctest::Approx(0.2));
  }
  {
    ProblemInstance inst = ProblemInstance::of(
        {ArmPrior::atoms({{0.9, 1.0}}), ArmPrior::atoms({{0.5, 0.5}, {1.0, 0.5}})});
    ExplorabilityReport rep = explorable_set(inst);
    CHECK(rep.arms[0].explorable);
    CHECK_FALSE(rep.arms[1].explorable);
    CHECK(rep.arms[1].reason == ExplorabilityReport::Reason::Dominated);
  }
  {
    ProblemInstance inst = ProblemInstance::of({ArmPrior::beta(2, 1), ArmPrior::beta(1, 1),
                                                ArmPrior::beta(1, 2)});
    ExplorabilityReport rep = explorable_set(inst);
    for (const auto& v : rep.arms) CHECK(v.explorable);
    CHECK(rep.first_failing == -1);
  }
}

TEST_CASE("explorability edge cases") {
  // two-point supports at the infimum: the edge arm is explorable on an event
  ProblemInstance edge = ProblemInstance::of(
      {ArmPrior::atoms({{0.3, 0.5}, {1.0, 0.5}}), ArmPrior::atoms({{0.3, 1.0}})});
  ExplorabilityReport rep = explorable_set(edge);
  CHECK(rep.arms[1].reason == ExplorabilityReport::Reason::SupportDegenerateEdge);

  // full-support arm at the infimum: the edge arm is not explorable
  ProblemInstance noedge = ProblemInstance::of(
      {ArmPrior::atoms({{0.3, 0.5}, {0.8, 0.5}}), ArmPrior::atoms({{0.3, 1.0}})});
  ExplorabilityReport rep2 = explorable_set(noedge);
  CHECK(rep2.arms[1].reason == ExplorabilityReport::Reason::NonDominantEdge);
}

TEST_CASE("chernoff tail rows") {
  std::vector<double> grid{0.0, 1.0, 2.0};
  auto rows = chernoff_tail_check(ArmPrior::beta(1, 1), 25, grid, 20000, 20.0, 99);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].tail_sample == doctest::Approx(1.0));
  CHECK(rows[0].bound >= 1.0);
  for (const auto& r : rows) {
    CHECK(r.tail_sample <= r.bound);
    CHECK(r.tail_mean <= r.bound);
  }
  // point mass: no uncertainty, zero tails for r > 0
  auto pm = chernoff_tail_check(ArmPrior::atoms({{0.5, 1.0}}), 25, grid, 2000, 20.0, 99);
  CHECK(pm[1].tail_sample == doctest::Approx(0.0));
  CHECK(pm[2].tail_mean == doctest::Approx(0.0));
}

TEST_CASE("submartingale property of posterior-mean times best-arm-probability") {
  // H_t = E^t[mu_i] Pr^t[A* = j]: pulling any arm makes H a submartingale for
  // i = j and a supermartingale for i != j; checked pointwise on all states
  // reachable within 3 rounds
  ProblemInstance inst = equal_mean_pair();
  auto H = [&](const std::vector<std::pair<i64, i64>>& counts, int i, int j) {
    std::vector<ArmPrior> posts;
    for (int a = 0; a < 2; ++a)
      posts.push_back(inst.arm(a).updated(counts[std::size_t(a)].first,
                                          counts[std::size_t(a)].second));
    std::vector<double> win = best_arm_probs(posts);
    return posts[std::size_t(i)].moments().mean * win[std::size_t(j)];
  };
  auto predictive = [&](const std::vector<std::pair<i64, i64>>& counts, int a) {
    return inst.arm(a)
        .updated(counts[std::size_t(a)].first, counts[std::size_t(a)].second)
        .moments()
        .mean;
  };
  // enumerate all count states with total pulls <= 2
  for (i64 n0 = 0; n0 <= 2; ++n0)
    for (i64 s0 = 0; s0 <= n0; ++s0)
      for (i64 n1 = 0; n1 + n0 <= 2; ++n1)
        for (i64 s1 = 0; s1 <= n1; ++s1) {
          std::vector<std::pair<i64, i64>> st{{n0, s0}, {n1, s1}};
          bool reachable = true;
          try {
            (void)predictive(st, 0);
            (void)predictive(st, 1);
          } catch (...) {
            reachable = false;
          }
          if (!reachable) continue;
          for (int pull = 0; pull < 2; ++pull) {
            double p1 = predictive(st, pull);
            for (int i = 0; i < 2; ++i)
              for (int j = 0; j < 2; ++j) {
                double here = H(st, i, j);
                auto up = st, dn = st;
                up[std::size_t(pull)].first++;
                up[std::size_t(pull)].second++;
                dn[std::size_t(pull)].first++;
                double next = p1 * H(up, i, j) + (1 - p1) * H(dn, i, j);
                if (i == j)
                  CHECK(next >= here - 1e-12);
                else
                  CHECK(next <= here + 1e-12);
              }
          }
        }
}
