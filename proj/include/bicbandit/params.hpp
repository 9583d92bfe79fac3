#pragma once

#include <optional>
#include <vector>

#include "bicbandit/instance.hpp"

namespace bic {

enum class Algorithm { Alg1, Alg2, Alg3 };

struct ComputeOptions {
  int beta_grid = 512;
  std::size_t regrid_threshold = 200000;
  int regrid_points = 8192;
  int subgrad_iters = 2000;
  i64 n_cap = 1000000;
};

struct TsParams {
  double eps_ts = 0;
  double delta_ts = 0;
  i64 n_ts = 0;
};

struct PaddedParams {
  double g_pad = 0;
  i64 n_pad = 0;
  double lambda = 0;
  int witness_arm = -1;                        // arm attaining the min
  std::vector<double> witness_q;               // weights over arms < witness_arm
  std::vector<double> per_arm_value;           // E[(mu_j - mu_q*)_+] per arm j >= 1
  std::vector<std::vector<double>> per_arm_q;  // minimizing q per arm j >= 1
};

struct BootstrapParams {
  i64 n_boot = 0;  // -1 encodes "infinite (not found within the cap)"
  double p_boot = 1.0;
  bool infinite() const { return n_boot < 0; }
};

struct PriorParams {
  int K = 1;
  double c_ts = 1, c_pad = 1;
  double eps_ts = 1, delta_ts = 1;
  i64 n_ts = 1;
  double g_pad = 0;
  i64 n_pad = 0;
  double lambda = 0;
  i64 n_boot = 0;
  bool n_boot_infinite = false;
  double p_boot = 1;
  std::vector<double> zeros_prob;  // Pr[ZEROS_{j, n_boot}] indexed by arm j (entry 0 = 1)
  double delta_easy = 0;           // instance-collection easy/non-dominance margin, 0 if not easy
  int g_pad_witness_arm = -1;
  std::vector<double> g_pad_witness_q;
  std::vector<std::vector<double>> per_arm_q;  // g_pad minimizer per arm j >= 1
};

struct ParamOverrides {
  double c_ts = 1.0;
  double c_pad = 1.0;
  std::optional<double> lambda;
  i64 n_cap = 1000000;
};

struct LowerBoundReport {
  double main_lb = 0;
  bool infinite = false;
  double k_component = 0;
  double n_boot_component = 0;  // -1 when infinite
  double ratio_component = 0;   // -1 when infinite
  int witness_arm = -1;
  std::vector<double> witness_q;  // weights over all K arms (entry at witness_arm is 0)
};

struct EasyHardReport {
  bool easy = false;
  bool hard = false;
  bool non_dominant = false;
  double easy_margin = 0;  // inf_P E[(mu - Phi)_+]
  double nd_margin = 0;    // min over ordered pairs of E[(mu_j^0 - mu_i)_+]
  double phi = 0;          // sup of prior means
};

TsParams ts_warmstart_params(const ProblemInstance& inst, double c_ts,
                             const ComputeOptions& opt = {});
PaddedParams padded_params(const ProblemInstance& inst, double c_pad,
                           const ComputeOptions& opt = {});
BootstrapParams bootstrap_params(const ProblemInstance& inst, i64 n_cap = 1000000);
LowerBoundReport lower_bound(const ProblemInstance& inst, const ComputeOptions& opt = {});
EasyHardReport classify_easy_hard(std::span<const ArmPrior> collection, double delta,
                                  const ComputeOptions& opt = {});

PriorParams compute_prior_params(const ProblemInstance& inst, const ParamOverrides& ov = {},
                                 const ComputeOptions& opt = {});

// Number of main-loop iterations: smallest n >= 0 with p0 (1+lambda)^n >= 1,
// evaluated with the same float updates the executor applies.
i64 growth_iters(double p0, double lambda);

// Exact round count of the chosen algorithm's phase layout. Rejects N below
// the algorithm's floor.
i64 rounds_budget(const PriorParams& params, int K, i64 N, Algorithm alg);
// Same, with N clamped up to the floor first (the convention used by sweeps).
i64 rounds_budget_clamped(const PriorParams& params, int K, i64 N, Algorithm alg);
i64 algorithm_floor(const PriorParams& params, Algorithm alg);

// Convex minimization of E[(mu_j - mu_q)_+] over the simplex, exploiting
// groups of identical priors (the minimizer is uniform within a group).
struct GapMinimum {
  double value = 0;
  std::vector<double> q;  // per-arm weights
};
GapMinimum minimize_gap_over_simplex(const ArmPrior& j_prior,
                                     std::span<const ArmPrior> others,
                                     const ComputeOptions& opt);

}  // namespace bic
