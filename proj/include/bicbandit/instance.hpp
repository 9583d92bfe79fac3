#pragma once

#include <cstdint>
#include <vector>

#include "bicbandit/prior.hpp"

namespace bic {

// K independent arms, indexed 0-based, prior means non-increasing in index.
class ProblemInstance {
 public:
  static ProblemInstance of(std::vector<ArmPrior> arms);

  int K() const { return int(arms_.size()); }
  const ArmPrior& arm(int i) const { return arms_[std::size_t(i)]; }
  const std::vector<ArmPrior>& arms() const { return arms_; }
  double prior_mean(int i) const { return means_[std::size_t(i)]; }

 private:
  std::vector<ArmPrior> arms_;
  std::vector<double> means_;
};

// Read-only view of the collected data; both the simulator and the exact
// enumerator implement it so phase resolution has one source of truth.
class DataView {
 public:
  virtual ~DataView() = default;
  virtual i64 pulls(int arm) const = 0;
  // successes among the first min(depth, pulls) samples; depth < 0 means all
  virtual i64 prefix_successes(int arm, i64 depth) const = 0;

  i64 prefix_len(int arm, i64 depth) const {
    i64 n = pulls(arm);
    return depth < 0 ? n : std::min(n, depth);
  }
  // true once every arm < j has >= n0 samples and their first n0 are all 0;
  // false as soon as any of those prefixes contains a success
  bool zeros_event(int j, i64 n0) const;
};

// Per-arm pull history with ordered outcomes (needed for prefix conditioning).
struct Dataset : DataView {
  struct ArmData {
    i64 n = 0;
    i64 s = 0;
    std::vector<std::uint8_t> outcomes;
  };
  std::vector<ArmData> arms;

  explicit Dataset(int K) : arms(std::size_t(K)) {}
  void record(int arm, int reward);

  i64 pulls(int arm) const override { return arms[std::size_t(arm)].n; }
  i64 prefix_successes(int arm, i64 depth) const override;
};

// Posterior mean of one arm given the first min(depth, n_i) samples.
double truncated_posterior_mean(const ProblemInstance& inst, const DataView& data, int arm,
                                i64 depth);
// Min-index argmax of truncated posterior means (the exploitation rule).
int exploit_step(const ProblemInstance& inst, const DataView& data, i64 depth);
// Posterior sample of the best arm (one posterior mean draw per arm).
int thompson_step(const ProblemInstance& inst, const DataView& data, Rng& rng);

}  // namespace bic
