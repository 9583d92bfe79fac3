#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bicbandit/dist.hpp"
#include "bicbandit/rng.hpp"

namespace bic {

struct Moments {
  double mean = 0;
  double variance = 0;
  double support_inf = 0;
  double support_sup = 0;
};

// Law of the success count after N Bernoulli draws, the first `zeros` of them
// conditioned to return 0. Index s counts successes among the free draws;
// mean[s] is the posterior mean reward given all N samples.
struct CountLaw {
  i64 samples = 0;
  i64 zeros = 0;
  std::vector<double> prob;
  std::vector<double> mean;
};

// One arm's reward-mean distribution: exact Beta, or atoms on [0,1].
class ArmPrior {
 public:
  enum class Kind { Beta, FiniteSupport };

  static ArmPrior beta(double a, double b);
  static ArmPrior atoms(std::vector<Atom> support);

  Kind kind() const { return kind_; }
  bool is_beta() const { return kind_ == Kind::Beta; }
  double a() const { return a_; }
  double b() const { return b_; }
  const std::vector<Atom>& support() const { return support_; }

  Moments moments() const;
  ArmPrior updated(i64 n, i64 s) const;
  CountLaw count_law(i64 N, i64 zeros_prefix = 0) const;

  double zeros_prob(i64 n) const;  // E[(1-mu)^n]
  double zero_mean(i64 n) const;   // E[mu | n zero samples]

  // For Beta priors, atoms are interval-conditional means on `grid` cells of
  // [0,1], so the discretization reproduces the prior mean exactly.
  DiscreteDist to_dist(int grid) const;

  double sample_mu(Rng& rng) const;
  double posterior_sample(Rng& rng, i64 n, i64 s) const;

  bool operator==(const ArmPrior& o) const;

 private:
  ArmPrior() = default;
  Kind kind_ = Kind::Beta;
  double a_ = 1, b_ = 1;
  std::vector<Atom> support_;
};

// Distribution of a posterior mean, with where it came from.
struct MeanDist {
  DiscreteDist dist;
  int arm = -1;
  i64 samples = 0;
  i64 zeros = 0;
  double mean() const { return dist.mean(); }
};

// Monotone coupling realized on the inverse-CDF cells of [0,1).
struct Coupling {
  struct Cell {
    double hi = 0;
    double lo = 0;
    double prob = 0;
  };
  std::vector<Cell> cells;
  // Conditional law of the partner given one side's draw (inverse-CDF
  // resampling on the matching CDF interval).
  DiscreteDist partner_given_lo(double lo_value) const;
  DiscreteDist partner_given_hi(double hi_value) const;
};

// Integer-valued analogue over success counts; used to build fake datasets.
struct CountCoupling {
  bool dominates = false;
  // hi_given_lo[s] = conditional law (count, prob) of the hi-side partner
  std::vector<std::vector<std::pair<i64, double>>> hi_given_lo;
  std::vector<std::vector<std::pair<i64, double>>> lo_given_hi;
};

struct GapOptions {
  int beta_grid = 512;
  std::size_t regrid_threshold = 200000;
  int regrid_points = 8192;
};

Moments prior_moments(const ArmPrior& p);
ArmPrior posterior_update(const ArmPrior& p, i64 n, i64 s);
MeanDist posterior_mean_dist(const ArmPrior& p, i64 N, i64 zeros_prefix = 0, int arm = -1);

std::pair<bool, std::optional<Coupling>> dominance_and_coupling(const MeanDist& hi,
                                                                const MeanDist& lo);
CountCoupling count_coupling(const CountLaw& hi, const CountLaw& lo);

// E[(mu_j - mu_q)_+] with mu_q = sum_i q_i mu_i over `others`.
double expected_positive_gap(const ArmPrior& j_prior, std::span<const ArmPrior> others,
                             std::span<const double> q, const GapOptions& opt = {});

ArmPrior discretize_truncated_gaussian(double nu, double sigma, int grid_points);

// Pr[A* = i] for all arms, with the min-index tie-break on the argmax.
std::vector<double> best_arm_probs(std::span<const ArmPrior> arms, int beta_grid = 512);

}  // namespace bic
