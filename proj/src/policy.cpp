#include "bicbandit/policy.hpp"

#include "bicbandit/errors.hpp"

namespace bic {

std::vector<double> PaddedPolicy::table(i64 cap) const {
  int n_arms = arm + 1;
  i64 radix = depth + 1;
  double approx = 1;
  for (int i = 0; i < n_arms; ++i) approx *= double(radix);
  require(approx <= double(cap), ErrorKind::TooLarge, "rule table too large to materialize");
  i64 D = 1;
  for (int i = 0; i < n_arms; ++i) D *= radix;
  std::vector<double> out(static_cast<std::size_t>(D));
  std::vector<i64> counts(std::size_t(n_arms), 0);
  for (i64 d = 0; d < D; ++d) {
    out[std::size_t(d)] = prob(counts);
    for (int i = 0; i < n_arms; ++i) {
      if (++counts[std::size_t(i)] <= depth) break;
      counts[std::size_t(i)] = 0;
    }
  }
  return out;
}

}  // namespace bic
