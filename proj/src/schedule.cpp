#include "bicbandit/schedule.hpp"

#include <algorithm>
#include <cmath>

#include "bicbandit/errors.hpp"

namespace bic {

namespace {

std::vector<i64> policy_counts(const PaddedPolicy& pol, const DataView& data, bool strict) {
  std::vector<i64> counts(std::size_t(pol.arm) + 1, 0);
  for (int i = 0; i <= pol.arm; ++i) {
    bool read = (i == pol.arm) || pol.meta.method.rfind("easy-exploit", 0) != 0;
    i64 have = data.prefix_len(i, pol.depth);
    if (read && strict)
      require(have == pol.depth || pol.depth == 0, ErrorKind::Internal,
              "padded phase fired before its policy had enough data");
    counts[std::size_t(i)] = data.prefix_successes(i, pol.depth);
  }
  return counts;
}

PaddedPolicy verify_and_tag(const ProblemInstance& inst, PaddedPolicy pol, double need_lambda,
                            const ScheduleOptions& opt) {
  if (opt.verify_padding) {
    // audit only when the joint space is enumerable at desk scale
    double sz = 1;
    for (int i = 0; i <= pol.arm; ++i) sz *= double(pol.depth + 1);
    if (sz <= double(opt.game.exact_cap)) {
      PolicyAudit audit = audit_policy(inst, pol, opt.game);
      require(audit.pad_margin >= need_lambda - 1e-9, ErrorKind::Validation,
              "policy construction failed: achieved padding below lambda");
      pol.meta.lambda_achieved = audit.pad_margin;
    }
  }
  return pol;
}

PaddedPolicy build_game_policy(const ProblemInstance& inst, const PriorParams& params, int j,
                               i64 depth, const ScheduleOptions& opt) {
  double sz = 1;
  for (int i = 0; i <= j; ++i) sz *= double(depth + 1);
  if (sz <= double(opt.game.lp_cap)) {
    return solve_recommendation_game(inst, j, depth, opt.game).policy;
  }
  const std::vector<double>& q = params.per_arm_q[std::size_t(j - 1)];
  return empirical_comparison_policy(inst, j, depth, q, opt.game);
}

}  // namespace

PhaseSchedule warmstart_schedule(const ProblemInstance& inst, i64 N) {
  require(N >= 1, ErrorKind::Validation, "warm start needs N >= 1");
  PhaseSchedule s;
  s.alg = Algorithm::Alg1;
  s.K = inst.K();
  s.N = N;
  s.lambda = 0;
  for (int i = 0; i < inst.K(); ++i) {
    Phase p;
    p.kind = Phase::Kind::Explore;
    p.length = N;
    p.arm = i;
    p.label = "warmstart-explore";
    s.phases.push_back(std::move(p));
  }
  s.total_rounds = N * i64(inst.K());
  return s;
}

PhaseSchedule build_schedule(const ProblemInstance& inst, const PriorParams& params, i64 N,
                             Algorithm alg, const ScheduleOptions& opt) {
  int K = inst.K();
  require(K == params.K, ErrorKind::Validation, "params were computed for a different K");
  PhaseSchedule s;
  s.alg = alg;
  s.K = K;
  s.N = N;

  if (K == 1) {
    Phase p;
    p.kind = Phase::Kind::Explore;
    p.length = std::max<i64>(N, 1);
    p.arm = 0;
    p.label = "explore";
    s.phases.push_back(std::move(p));
    s.total_rounds = s.phases.back().length;
    s.policies.push_back(always_recommend_policy(0));
    return s;
  }

  i64 floor = algorithm_floor(params, alg);
  require(N >= floor, ErrorKind::Validation, "N below the algorithm's floor");
  s.N0 = params.n_boot;

  auto push = [&](Phase p) {
    require(i64(s.phases.size()) < opt.max_phases, ErrorKind::TooLarge,
            "schedule has too many phases");
    s.phases.push_back(std::move(p));
  };

  if (alg == Algorithm::Alg1 || alg == Algorithm::Alg2) {
    s.lambda = params.lambda;
    require(s.lambda > 0, ErrorKind::Validation, "lambda must be positive");
    i64 P = (alg == Algorithm::Alg1) ? N : std::max(params.n_pad, params.n_boot);
    i64 L = (alg == Algorithm::Alg1) ? N : std::max(N, P);
    i64 policy_depth = (alg == Algorithm::Alg1) ? N : params.n_pad;
    s.n_pad = params.n_pad;

    s.policies.resize(std::size_t(K));
    s.transformed.resize(std::size_t(K));
    s.policies[0] = always_recommend_policy(0);
    for (int j = 1; j < K; ++j) {
      PaddedPolicy pol = build_game_policy(inst, params, j, policy_depth, opt);
      s.policies[std::size_t(j)] = verify_and_tag(inst, pol, s.lambda, opt);
      s.transformed[std::size_t(j)] =
          transform_policy(inst, s.policies[std::size_t(j)], params.n_boot);
    }

    {
      Phase p;
      p.kind = Phase::Kind::Explore;
      p.length = L;
      p.arm = 0;
      p.label = "explore-init";
      push(std::move(p));
    }
    for (int j = 1; j < K; ++j) {
      double q = s.lambda * params.zeros_prob[std::size_t(j)];
      double pj = q / (1.0 + q);
      {
        Phase p;
        p.kind = Phase::Kind::Exploit;
        p.length = P;
        p.depth = params.n_boot;
        p.arm = j;
        p.label = "boot-exploit";
        push(std::move(p));
      }
      {
        Phase p;
        p.kind = Phase::Kind::Alg1Boot;
        p.length = P;
        p.arm = j;
        p.depth = (alg == Algorithm::Alg1) ? N : P;
        p.zeros_n0 = params.n_boot;
        p.coin = pj;
        p.recorded_p = pj;
        p.label = "boot-branch";
        push(std::move(p));
      }
      double pcur = pj;
      int iter = 0;
      while (pcur < 1.0) {
        Phase p;
        p.kind = Phase::Kind::Grow;
        p.length = P;
        p.arm = j;
        p.depth = (alg == Algorithm::Alg1) ? N : P;
        p.coin = std::min(1.0, pcur / (1.0 - pcur) * s.lambda);
        p.recorded_p = pcur;
        p.label = "grow#" + std::to_string(iter++);
        push(std::move(p));
        pcur = std::min(1.0, pcur * (1.0 + s.lambda));
      }
    }
    if (alg == Algorithm::Alg2) {
      s.n_lambda = 1 + int(std::ceil(1.0 / s.lambda));
      for (int g = 0; g < K; ++g) {
        for (int l = 0; l < s.n_lambda; ++l) {
          Phase p;
          p.kind = Phase::Kind::FinalSlot;
          p.length = L;
          p.arm = g;
          p.depth = P;
          p.group = g;
          p.slot = l;
          p.label = "post";
          push(std::move(p));
        }
      }
    }
  } else {
    // Alg3: one growth loop for a random arm j0, then slot exploration
    require(params.delta_easy > 0, ErrorKind::Validation,
            "Alg3 requires a delta-easy, delta-non-dominant instance");
    double l3 = params.delta_easy / 10.0;
    s.lambda = l3;
    s.n_pad = params.n_pad;
    s.n_lambda = 1 + int(std::ceil(1.0 / l3));
    s.policies.resize(std::size_t(K));
    for (int j = 0; j < K; ++j) {
      PaddedPolicy pol = easy_exploit_policy(inst, j, params.n_pad);
      s.policies[std::size_t(j)] = (j == 0) ? pol : verify_and_tag(inst, pol, l3, opt);
    }
    for (int j = 0; j < K; ++j) {
      Phase p;
      p.kind = Phase::Kind::Exploit;
      p.length = params.n_boot;
      p.depth = params.n_boot;
      p.label = "setup-exploit";
      push(std::move(p));
    }
    {
      Phase p;
      p.kind = Phase::Kind::Alg3ZerosExplore;
      p.length = params.n_pad;
      p.arm = kArmJ0;
      p.depth = params.n_boot;
      p.zeros_n0 = params.n_boot;
      p.label = "zeros-explore";
      push(std::move(p));
    }
    double q = l3 * params.p_boot;
    double pinit = q / (1.0 + q);
    {
      Phase p;
      p.kind = Phase::Kind::Alg3Boot;
      p.length = params.n_pad;
      p.arm = kArmJ0;
      p.depth = params.n_pad;
      p.coin = pinit;
      p.recorded_p = pinit;
      p.label = "boot-branch";
      push(std::move(p));
    }
    double pcur = params.p_boot;
    int iter = 0;
    while (pcur < 1.0) {
      Phase p;
      p.kind = Phase::Kind::Grow;
      p.length = params.n_pad;
      p.arm = kArmJ0;
      p.depth = params.n_pad;
      p.coin = std::min(1.0, pcur / (1.0 - pcur) * l3);
      p.recorded_p = pcur;
      p.label = "grow#" + std::to_string(iter++);
      push(std::move(p));
      pcur = std::min(1.0, pcur * (1.0 + l3));
    }
    for (int g = 0; g < K; ++g) {
      for (int l = 0; l < s.n_lambda; ++l) {
        Phase p;
        p.kind = Phase::Kind::FinalSlot;
        p.length = N;
        p.arm = kArmSlot;
        p.depth = params.n_pad;
        p.group = g;
        p.slot = l;
        p.label = "post";
        push(std::move(p));
      }
    }
  }

  for (const Phase& p : s.phases) s.total_rounds += p.length;
  i64 budget = rounds_budget(params, K, N, alg);
  require(s.total_rounds == budget, ErrorKind::Internal,
          "schedule layout disagrees with rounds_budget");
  return s;
}

std::vector<PhaseBranch> resolve_phase(const ProblemInstance& inst, const PhaseSchedule& sched,
                                       int phase_idx, const DataView& data,
                                       std::uint32_t explored_mask, const Alg3Draws* draws) {
  const Phase& ph = sched.phases[std::size_t(phase_idx)];
  auto resolve_arm = [&](int a) {
    if (a == kArmJ0) {
      require(draws != nullptr, ErrorKind::Internal, "Alg3 draws missing");
      return draws->j0;
    }
    return a;
  };
  auto is_explored = [&](int a) { return (explored_mask >> a) & 1u; };
  std::vector<PhaseBranch> out;
  auto padded_branches = [&](const PaddedPolicy& pol, double weight) {
    std::vector<i64> counts = policy_counts(pol, data, true);
    double pp = pol.prob(counts);
    if (pp > 0) out.push_back({weight * pp, pol.arm, false});
    if (pp < 1) out.push_back({weight * (1 - pp), exploit_step(inst, data, ph.depth), false});
  };

  switch (ph.kind) {
    case Phase::Kind::Explore:
      out.push_back({1.0, resolve_arm(ph.arm), true});
      break;
    case Phase::Kind::Exploit:
      out.push_back({1.0, exploit_step(inst, data, ph.depth), false});
      break;
    case Phase::Kind::Alg1Boot: {
      int j = ph.arm;
      if (ph.coin > 0) out.push_back({ph.coin, j, true});
      double rest = 1.0 - ph.coin;
      if (rest > 0) {
        if (data.zeros_event(j, ph.zeros_n0)) {
          padded_branches(sched.transformed[std::size_t(j)], rest);
        } else {
          out.push_back({rest, exploit_step(inst, data, ph.depth), false});
        }
      }
      break;
    }
    case Phase::Kind::Alg3ZerosExplore: {
      int j0 = resolve_arm(ph.arm);
      if (data.zeros_event(j0, ph.zeros_n0)) {
        out.push_back({1.0, j0, true});
      } else {
        out.push_back({1.0, exploit_step(inst, data, ph.depth), false});
      }
      break;
    }
    case Phase::Kind::Alg3Boot: {
      int j0 = resolve_arm(ph.arm);
      if (ph.coin > 0) out.push_back({ph.coin, j0, true});
      double rest = 1.0 - ph.coin;
      if (rest > 0) {
        if (is_explored(j0)) {
          padded_branches(sched.policies[std::size_t(j0)], rest);
        } else {
          out.push_back({rest, exploit_step(inst, data, ph.depth), false});
        }
      }
      break;
    }
    case Phase::Kind::Grow: {
      int j = resolve_arm(ph.arm);
      if (is_explored(j)) {
        padded_branches(sched.policies[std::size_t(j)], 1.0);
      } else {
        if (ph.coin > 0) out.push_back({ph.coin, j, true});
        if (ph.coin < 1)
          out.push_back({1.0 - ph.coin, exploit_step(inst, data, ph.depth), false});
      }
      break;
    }
    case Phase::Kind::FinalSlot: {
      int slot_arm = ph.group;
      int chosen = 0;
      if (sched.alg == Algorithm::Alg3) {
        require(draws != nullptr, ErrorKind::Internal, "Alg3 draws missing");
        slot_arm = draws->theta[std::size_t(ph.group)];
        chosen = draws->slots[std::size_t(ph.group)];
      } else {
        // Alg2: the slot is drawn per group from the phase stream by the
        // caller; encoded in draws->slots as well
        require(draws != nullptr, ErrorKind::Internal, "slot draws missing");
        chosen = draws->slots[std::size_t(ph.group)];
      }
      if (ph.slot == chosen) {
        out.push_back({1.0, slot_arm, true});
      } else {
        const PaddedPolicy& pol = (sched.alg == Algorithm::Alg3)
                                      ? sched.policies[std::size_t(resolve_arm(kArmJ0))]
                                      : sched.policies[std::size_t(ph.group)];
        padded_branches(pol, 1.0);
      }
      break;
    }
  }
  return out;
}

RunTrace run_algorithm(const ProblemInstance& inst, const RunSpec& spec,
                       std::uint64_t master_seed) {
  int K = inst.K();
  RunTrace trace;
  trace.master_seed = master_seed;
  trace.mu.resize(std::size_t(K));
  trace.pulls.assign(std::size_t(K), 0);
  trace.successes.assign(std::size_t(K), 0);

  Rng mu_rng = Rng::stream(master_seed, 0, 0);
  for (int i = 0; i < K; ++i) trace.mu[std::size_t(i)] = inst.arm(i).sample_mu(mu_rng);
  trace.astar = 0;
  for (int i = 1; i < K; ++i)
    if (trace.mu[std::size_t(i)] > trace.mu[std::size_t(trace.astar)]) trace.astar = i;

  Dataset data(K);
  i64 t = 0;
  auto play = [&](int arm, int phase_idx, Rng& rng) {
    int reward = rng.bernoulli(trace.mu[std::size_t(arm)]) ? 1 : 0;
    data.record(arm, reward);
    trace.rows.push_back({t, phase_idx, arm, reward});
    trace.pulls[std::size_t(arm)] += 1;
    trace.successes[std::size_t(arm)] += reward;
    trace.regret += trace.mu[std::size_t(trace.astar)] - trace.mu[std::size_t(arm)];
    ++t;
  };

  const PhaseSchedule* sched = spec.schedule;
  if (spec.mode != RunSpec::Mode::ThompsonOnly) {
    require(sched != nullptr, ErrorKind::Validation, "run needs a schedule");
    Alg3Draws draws;
    bool need_draws = sched->alg == Algorithm::Alg3;
    bool need_slots = need_draws || sched->n_lambda > 0;
    if (need_draws) {
      Rng pre = Rng::stream(master_seed, 3, 0);
      draws.j0 = int(pre.below(std::uint64_t(K)));
      draws.theta = Rng::stream(master_seed, 3, 1).permutation(K);
      trace.j0 = draws.j0;
      trace.theta = draws.theta;
    }
    if (need_slots && sched->n_lambda > 0) {
      draws.slots.resize(std::size_t(K));
      for (int g = 0; g < K; ++g)
        draws.slots[std::size_t(g)] =
            int(Rng::stream(master_seed, 3, 2 + std::uint64_t(g)).below(std::uint64_t(sched->n_lambda)));
      trace.slots = draws.slots;
    }
    std::uint32_t explored = 0;
    for (int pi = 0; pi < int(sched->phases.size()); ++pi) {
      Rng phase_rng = Rng::stream(master_seed, 1, std::uint64_t(pi));
      std::vector<PhaseBranch> branches =
          resolve_phase(inst, *sched, pi, data, explored, &draws);
      double u = phase_rng.uniform();
      double acc = 0;
      const PhaseBranch* pick = &branches.back();
      for (const PhaseBranch& b : branches) {
        acc += b.prob;
        if (u < acc) {
          pick = &b;
          break;
        }
      }
      if (pick->sets_explored) explored |= (1u << pick->arm);
      for (i64 r = 0; r < sched->phases[std::size_t(pi)].length; ++r)
        play(pick->arm, pi, phase_rng);
    }
    trace.schedule_rounds = t;
    // the schedule must have collected N samples of each arm, almost surely
    for (int i = 0; i < K; ++i)
      require(trace.pulls[std::size_t(i)] >= sched->N, ErrorKind::Internal,
              "schedule ended with fewer than N samples of an arm");
  }

  if (spec.mode != RunSpec::Mode::Schedule) {
    require(spec.horizon >= trace.schedule_rounds, ErrorKind::Validation,
            "horizon shorter than the schedule");
    while (t < spec.horizon) {
      Rng ts_rng = Rng::stream(master_seed, 2, std::uint64_t(t));
      int arm = thompson_step(inst, data, ts_rng);
      play(arm, -1, ts_rng);
    }
  }
  return trace;
}

}  // namespace bic
