#pragma once

#include "bicbandit/instance.hpp"
#include "bicbandit/policy.hpp"

namespace bic {

struct GameOptions {
  i64 exact_cap = i64(1) << 20;  // joint outcome-space cap for exact sums
  i64 lp_cap = 512;              // outcome cap for the exact LP solve
  i64 mc_samples = 200000;
  std::uint64_t mc_seed = 12345;
};

struct GameValue {
  double value = 0;
  double std_error = 0;  // 0 in exact mode
  bool exact = true;
};

// Best-response value sum_d P(d) (m_j(d) - m_q(d))_+ for a fixed agent mix q
// over arms < j.
GameValue game_value_for_q(const ProblemInstance& inst, int j, i64 N,
                           std::span<const double> q, const GameOptions& opt = {});

struct GameSolution {
  double value = 0;
  std::vector<double> q_star;
  PaddedPolicy policy;
};

// Exact maximin solve of the (j,N)-recommendation game via the agent-side LP;
// ties are randomized to keep the maximin value and monotone recommendation.
GameSolution solve_recommendation_game(const ProblemInstance& inst, int j, i64 N,
                                       const GameOptions& opt = {});

// Recommend j iff its empirical mean strictly beats the q-average of the
// earlier arms' empirical means.
PaddedPolicy empirical_comparison_policy(const ProblemInstance& inst, int j, i64 N,
                                         std::span<const double> q,
                                         const GameOptions& opt = {});

// Worst-case-coupled comparison policy for Beta priors with parameters in
// [1, M]: couples each arm to its extremal Beta counterpart and compares the
// coupled posterior means against the uniform average.
PaddedPolicy beta_efficient_policy(int j, i64 N, int M, std::span<const ArmPrior> actual,
                                   std::uint64_t seed = 0, const GameOptions& opt = {});

// Policy to be used only under ZEROS_{j,N0}: feeds the base policy fake
// unconditional data coupled above the true zeros-conditioned data.
PaddedPolicy transform_policy(const ProblemInstance& inst, const PaddedPolicy& base, i64 N0);

// Exploitation on arm j's samples alone; valid on easy, non-dominant
// instances. Recommends j iff E[mu_j | s_j, n_pad] >= max_{i<j} prior mean.
PaddedPolicy easy_exploit_policy(const ProblemInstance& inst, int j, i64 n_pad);

// The trivial policy for the top-prior arm (used by post-processing loops).
PaddedPolicy always_recommend_policy(int j);

struct PolicyAudit {
  double pad_margin = 0;     // min_{i<j} E[(mu_j - mu_i) 1{A=j}]
  double higher_margin = 0;  // min_{i>j} of the same
  double bic_min = 0;        // min over all (l,i), including exploit fallback
  bool monotone = true;      // non-decreasing in s_j, non-increasing in s_i
  double recommend_prob = 0;
};

// One-shot audit of the executed policy (recommendation + exploit fallback)
// by exact enumeration of the joint count space. A policy with zeros_depth
// N0 > 0 is audited conditional on ZEROS_{j,N0}.
PolicyAudit audit_policy(const ProblemInstance& inst, const PaddedPolicy& policy,
                         const GameOptions& opt = {});

}  // namespace bic
