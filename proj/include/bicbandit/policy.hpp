#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "bicbandit/prior.hpp"

namespace bic {

// Probability of recommending arm j, as a function of the success counts of
// arms 0..j on their first N samples. (j,N)-informed by construction: the
// rule receives nothing else.
class RecommendRule {
 public:
  virtual ~RecommendRule() = default;
  virtual double prob(std::span<const i64> counts) const = 0;
};

struct PolicyMeta {
  std::string method;
  double lambda_achieved = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> q_star;
  std::uint64_t seed = 0;
};

struct PaddedPolicy {
  int arm = 0;          // j (0-based)
  i64 depth = 0;        // N
  i64 zeros_depth = 0;  // nonzero for ZEROS-transformed policies
  bool exploit_on_abstain = true;
  std::shared_ptr<const RecommendRule> rule;
  PolicyMeta meta;

  double prob(std::span<const i64> counts) const { return rule->prob(counts); }
  // Full rule table over {0..N}^(j+1), arm-0 index fastest.
  std::vector<double> table(i64 cap = i64(1) << 22) const;
};

}  // namespace bic
