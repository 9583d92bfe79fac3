#include "bicbandit/instance.hpp"

#include <algorithm>

#include "bicbandit/errors.hpp"

namespace bic {

ProblemInstance ProblemInstance::of(std::vector<ArmPrior> arms) {
  require(!arms.empty(), ErrorKind::Validation, "instance needs at least one arm");
  ProblemInstance inst;
  inst.means_.reserve(arms.size());
  for (const ArmPrior& p : arms) inst.means_.push_back(p.moments().mean);
  for (std::size_t i = 1; i < arms.size(); ++i)
    require(inst.means_[i] <= inst.means_[i - 1] + 1e-12, ErrorKind::Validation,
            "arms must be ordered by non-increasing prior mean");
  inst.arms_ = std::move(arms);
  return inst;
}

bool DataView::zeros_event(int j, i64 n0) const {
  for (int i = 0; i < j; ++i) {
    i64 seen = prefix_len(i, n0);
    if (prefix_successes(i, n0) > 0) return false;
    if (seen < n0) return false;  // prefix not fully observed; treated as not-ZEROS
  }
  return true;
}

void Dataset::record(int arm, int reward) {
  ArmData& a = arms[std::size_t(arm)];
  a.n += 1;
  a.s += reward;
  a.outcomes.push_back(std::uint8_t(reward));
}

i64 Dataset::prefix_successes(int arm, i64 depth) const {
  const ArmData& a = arms[std::size_t(arm)];
  if (depth < 0 || depth >= a.n) return a.s;
  i64 s = 0;
  for (i64 k = 0; k < depth; ++k) s += a.outcomes[std::size_t(k)];
  return s;
}

double truncated_posterior_mean(const ProblemInstance& inst, const DataView& data, int arm,
                                i64 depth) {
  i64 n = data.prefix_len(arm, depth);
  i64 s = data.prefix_successes(arm, depth);
  if (n == 0) return inst.prior_mean(arm);
  return inst.arm(arm).updated(n, s).moments().mean;
}

int exploit_step(const ProblemInstance& inst, const DataView& data, i64 depth) {
  int best = 0;
  double best_mean = -1;
  for (int i = 0; i < inst.K(); ++i) {
    double m = truncated_posterior_mean(inst, data, i, depth);
    if (m > best_mean) {  // strict: ties resolve to the smaller index
      best = i;
      best_mean = m;
    }
  }
  return best;
}

int thompson_step(const ProblemInstance& inst, const DataView& data, Rng& rng) {
  int best = 0;
  double best_draw = -1;
  for (int i = 0; i < inst.K(); ++i) {
    i64 n = data.pulls(i);
    i64 s = data.prefix_successes(i, -1);
    double draw = inst.arm(i).posterior_sample(rng, n, s);
    if (draw > best_draw) {  // strict: ties resolve to the smaller index
      best = i;
      best_draw = draw;
    }
  }
  return best;
}

}  // namespace bic
