#include "bicbandit/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bicbandit/errors.hpp"
#include "bicbandit/lp.hpp"
#include "bicbandit/params.hpp"

namespace bic {

namespace {

constexpr double kTieTol = 1e-9;

void check_simplex(std::span<const double> q, std::size_t want) {
  require(q.size() == want, ErrorKind::Validation, "q has the wrong arity");
  double total = 0;
  for (double w : q) {
    require(w >= 0, ErrorKind::Validation, "q has a negative weight");
    total += w;
  }
  require(std::fabs(total - 1.0) <= 1e-9, ErrorKind::Validation, "q must sum to 1");
}

i64 joint_size(const std::vector<CountLaw>& laws) {
  double approx = 1;
  for (const CountLaw& l : laws) approx *= double(l.prob.size());
  if (approx > 9e18) return std::numeric_limits<i64>::max();
  i64 D = 1;
  for (const CountLaw& l : laws) D *= i64(l.prob.size());
  return D;
}

template <typename F>
void for_each_outcome(const std::vector<CountLaw>& laws, F&& f) {
  std::size_t n = laws.size();
  std::vector<i64> counts(n, 0);
  for (;;) {
    double p = 1;
    for (std::size_t i = 0; i < n; ++i) p *= laws[i].prob[std::size_t(counts[i])];
    f(std::span<const i64>(counts), p);
    std::size_t i = 0;
    for (; i < n; ++i) {
      if (++counts[i] < i64(laws[i].prob.size())) break;
      counts[i] = 0;
    }
    if (i == n) break;
  }
}

class TableRule : public RecommendRule {
 public:
  TableRule(std::vector<double> probs, int n_arms, i64 radix)
      : probs_(std::move(probs)), n_arms_(n_arms), radix_(radix) {}
  double prob(std::span<const i64> counts) const override {
    i64 idx = 0, mult = 1;
    for (int i = 0; i < n_arms_; ++i) {
      idx += counts[std::size_t(i)] * mult;
      mult *= radix_;
    }
    return probs_[std::size_t(idx)];
  }

 private:
  std::vector<double> probs_;
  int n_arms_;
  i64 radix_;
};

class CompareRule : public RecommendRule {
 public:
  CompareRule(std::vector<double> q, int j) : q_(std::move(q)), j_(j) {}
  double prob(std::span<const i64> counts) const override {
    double avg = 0;
    for (int i = 0; i < j_; ++i) avg += q_[std::size_t(i)] * double(counts[std::size_t(i)]);
    return double(counts[std::size_t(j_)]) > avg ? 1.0 : 0.0;
  }

 private:
  std::vector<double> q_;
  int j_;
};

class ThresholdRule : public RecommendRule {
 public:
  ThresholdRule(int j, i64 threshold) : j_(j), threshold_(threshold) {}
  double prob(std::span<const i64> counts) const override {
    return counts[std::size_t(j_)] >= threshold_ ? 1.0 : 0.0;
  }

 private:
  int j_;
  i64 threshold_;
};

class ConstRule : public RecommendRule {
 public:
  explicit ConstRule(double p) : p_(p) {}
  double prob(std::span<const i64>) const override { return p_; }

 private:
  double p_;
};

// Sum over fake datasets drawn from per-arm count couplings; `fake_means`
// gives the value compared on the fake side.
class CoupledCompareRule : public RecommendRule {
 public:
  CoupledCompareRule(int j, std::vector<std::vector<std::vector<std::pair<i64, double>>>> cond,
                     std::vector<std::vector<double>> fake_means_lower, std::vector<double> fake_means_j)
      : j_(j), cond_(std::move(cond)), fake_lower_(std::move(fake_means_lower)),
        fake_j_(std::move(fake_means_j)) {}

  double prob(std::span<const i64> counts) const override {
    // law of the sum of the lower arms' fake means, built arm by arm
    std::vector<std::pair<double, double>> acc{{0.0, 1.0}};  // (sum, prob)
    for (int i = 0; i < j_; ++i) {
      const auto& c = cond_[std::size_t(i)].at(std::size_t(counts[std::size_t(i)]));
      std::vector<std::pair<double, double>> next;
      next.reserve(acc.size() * c.size());
      for (const auto& [sum, p] : acc)
        for (const auto& [fake_s, cp] : c)
          next.push_back({sum + fake_lower_[std::size_t(i)][std::size_t(fake_s)], p * cp});
      acc.swap(next);
    }
    const auto& cj = cond_[std::size_t(j_)].at(std::size_t(counts[std::size_t(j_)]));
    double total = 0;
    for (const auto& [sum, p] : acc) {
      double avg = (j_ > 0) ? sum / double(j_) : -1.0;
      for (const auto& [fake_s, cp] : cj)
        if (fake_j_[std::size_t(fake_s)] >= avg) total += p * cp;
    }
    return total;
  }

 private:
  int j_;
  std::vector<std::vector<std::vector<std::pair<i64, double>>>> cond_;
  std::vector<std::vector<double>> fake_lower_;
  std::vector<double> fake_j_;
};

// Applies the base rule to fake counts coupled above the true zeros-
// conditioned counts of every arm below j.
class TransformedRule : public RecommendRule {
 public:
  TransformedRule(std::shared_ptr<const RecommendRule> base, int j,
                  std::vector<std::vector<std::vector<std::pair<i64, double>>>> cond)
      : base_(std::move(base)), j_(j), cond_(std::move(cond)) {}

  double prob(std::span<const i64> counts) const override {
    std::vector<i64> fake(std::size_t(j_) + 1, 0);
    fake[std::size_t(j_)] = counts[std::size_t(j_)];
    return walk(0, fake, counts);
  }

 private:
  double walk(int i, std::vector<i64>& fake, std::span<const i64> counts) const {
    if (i == j_) return base_->prob(fake);
    i64 s = counts[std::size_t(i)];
    require(s < i64(cond_[std::size_t(i)].size()), ErrorKind::Validation,
            "count outside the ZEROS-conditioned domain");
    double total = 0;
    for (const auto& [fs, cp] : cond_[std::size_t(i)][std::size_t(s)]) {
      fake[std::size_t(i)] = fs;
      total += cp * walk(i + 1, fake, counts);
    }
    return total;
  }

  std::shared_ptr<const RecommendRule> base_;
  int j_;
  std::vector<std::vector<std::vector<std::pair<i64, double>>>> cond_;
};

std::vector<CountLaw> laws_for(const ProblemInstance& inst, int j, i64 N, i64 zeros_prefix) {
  std::vector<CountLaw> laws;
  laws.reserve(std::size_t(j) + 1);
  for (int i = 0; i < j; ++i) laws.push_back(inst.arm(i).count_law(N, zeros_prefix));
  laws.push_back(inst.arm(j).count_law(N, 0));
  return laws;
}

}  // namespace

GameValue game_value_for_q(const ProblemInstance& inst, int j, i64 N,
                           std::span<const double> q, const GameOptions& opt) {
  require(j >= 1 && j < inst.K(), ErrorKind::Validation, "game needs 1 <= j < K");
  check_simplex(q, std::size_t(j));
  GameValue out;
  // joint size over the arms the value actually depends on
  double sz = double(N + 1);
  for (int i = 0; i < j; ++i)
    if (q[std::size_t(i)] > 0) sz *= double(N + 1);
  if (sz <= double(opt.exact_cap)) {
    std::vector<DiscreteDist> mean_dists;
    std::vector<const DiscreteDist*> parts;
    std::vector<double> w;
    for (int i = 0; i < j; ++i) {
      if (q[std::size_t(i)] == 0) continue;
      mean_dists.push_back(posterior_mean_dist(inst.arm(i), N, 0, i).dist);
      w.push_back(q[std::size_t(i)]);
    }
    parts.reserve(mean_dists.size());
    for (const auto& d : mean_dists) parts.push_back(&d);
    DiscreteDist mix = weighted_sum(parts, w, 0, 0);  // exact, no regrid
    DiscreteDist y = posterior_mean_dist(inst.arm(j), N, 0, j).dist;
    out.value = expected_positive_diff(y, mix);
    out.exact = true;
    return out;
  }
  // Monte Carlo with standard error
  std::vector<CountLaw> laws = laws_for(inst, j, N, 0);
  Rng rng = Rng::stream(opt.mc_seed, 404, std::uint64_t(j));
  double sum = 0, sq = 0;
  for (i64 rep = 0; rep < opt.mc_samples; ++rep) {
    double mq = 0;
    for (int i = 0; i < j; ++i) {
      if (q[std::size_t(i)] == 0) continue;
      double mu = inst.arm(i).sample_mu(rng);
      i64 s = 0;
      for (i64 t = 0; t < N; ++t) s += rng.bernoulli(mu);
      mq += q[std::size_t(i)] * laws[std::size_t(i)].mean[std::size_t(s)];
    }
    double mu_j = inst.arm(j).sample_mu(rng);
    i64 sj = 0;
    for (i64 t = 0; t < N; ++t) sj += rng.bernoulli(mu_j);
    double val = laws[std::size_t(j)].mean[std::size_t(sj)] - mq;
    double x = val > 0 ? val : 0.0;
    sum += x;
    sq += x * x;
  }
  double n = double(opt.mc_samples);
  out.value = sum / n;
  out.std_error = std::sqrt(std::max(0.0, sq / n - out.value * out.value) / n);
  out.exact = false;
  return out;
}

GameSolution solve_recommendation_game(const ProblemInstance& inst, int j, i64 N,
                                       const GameOptions& opt) {
  require(j >= 1 && j < inst.K(), ErrorKind::Validation, "game needs 1 <= j < K");
  std::vector<CountLaw> laws = laws_for(inst, j, N, 0);
  i64 D = joint_size(laws);
  require(D <= opt.lp_cap, ErrorKind::TooLarge,
          "outcome space too large for the exact solve; use empirical_comparison_policy");

  std::vector<double> P(static_cast<std::size_t>(D));
  std::vector<std::vector<double>> m(std::size_t(j) + 1, std::vector<double>(std::size_t(D)));
  {
    i64 d = 0;
    for_each_outcome(laws, [&](std::span<const i64> counts, double p) {
      P[std::size_t(d)] = p;
      for (int i = 0; i <= j; ++i)
        m[std::size_t(i)][std::size_t(d)] = laws[std::size_t(i)].mean[std::size_t(counts[std::size_t(i)])];
      ++d;
    });
  }

  // agent-side LP: min sum_d P_d t_d  s.t.  t_d + sum_i q_i m_i(d) >= m_j(d)
  LpProblem lp;
  std::size_t nq = std::size_t(j), nt = std::size_t(D);
  lp.c.assign(nq + nt, 0.0);
  for (std::size_t d = 0; d < nt; ++d) lp.c[nq + d] = P[d];
  for (std::size_t d = 0; d < nt; ++d) {
    std::vector<double> row(nq + nt, 0.0);
    for (std::size_t i = 0; i < nq; ++i) row[i] = m[i][d];
    row[nq + d] = 1.0;
    lp.add_row(std::move(row), LpProblem::Rel::Ge, m[std::size_t(j)][d]);
  }
  {
    std::vector<double> row(nq + nt, 0.0);
    for (std::size_t i = 0; i < nq; ++i) row[i] = 1.0;
    lp.add_row(std::move(row), LpProblem::Rel::Eq, 1.0);
  }
  LpResult res = lp_solve(lp);
  require(res.status == LpResult::Status::Optimal, ErrorKind::Internal,
          "recommendation-game LP did not solve");

  GameSolution sol;
  sol.value = res.objective;
  sol.q_star.assign(res.x.begin(), res.x.begin() + j);

  std::vector<double> pi(std::size_t(D), 0.0);
  std::vector<i64> ties;
  for (i64 d = 0; d < D; ++d) {
    double mq = 0;
    for (int i = 0; i < j; ++i) mq += sol.q_star[std::size_t(i)] * m[std::size_t(i)][std::size_t(d)];
    double diff = m[std::size_t(j)][std::size_t(d)] - mq;
    if (diff > kTieTol)
      pi[std::size_t(d)] = 1.0;
    else if (diff >= -kTieTol)
      ties.push_back(d);
  }

  // payoffs against each pure response, with the ties still open
  std::vector<double> base(std::size_t(j), 0.0);
  for (i64 d = 0; d < D; ++d) {
    if (pi[std::size_t(d)] == 0.0) continue;
    for (int i = 0; i < j; ++i)
      base[std::size_t(i)] +=
          P[std::size_t(d)] * (m[std::size_t(j)][std::size_t(d)] - m[std::size_t(i)][std::size_t(d)]);
  }

  if (!ties.empty()) {
    // tie coefficients per opponent
    std::vector<std::vector<double>> c(std::size_t(j), std::vector<double>(ties.size(), 0.0));
    for (std::size_t t = 0; t < ties.size(); ++t) {
      i64 d = ties[t];
      for (int i = 0; i < j; ++i)
        c[std::size_t(i)][t] =
            P[std::size_t(d)] * (m[std::size_t(j)][std::size_t(d)] - m[std::size_t(i)][std::size_t(d)]);
    }
    // componentwise order between tie outcomes (monotone recommendation)
    auto decode = [&](i64 d) {
      std::vector<i64> counts(std::size_t(j) + 1);
      for (int i = 0; i <= j; ++i) {
        counts[std::size_t(i)] = d % i64(laws[std::size_t(i)].prob.size());
        d /= i64(laws[std::size_t(i)].prob.size());
      }
      return counts;
    };
    std::vector<std::pair<std::size_t, std::size_t>> below_pairs;  // (low, high)
    for (std::size_t a = 0; a < ties.size(); ++a) {
      auto ca = decode(ties[a]);
      for (std::size_t b = 0; b < ties.size(); ++b) {
        if (a == b) continue;
        auto cb = decode(ties[b]);
        bool le = ca[std::size_t(j)] <= cb[std::size_t(j)];
        for (int i = 0; i < j && le; ++i) le = ca[std::size_t(i)] >= cb[std::size_t(i)];
        bool same = true;
        for (int i = 0; i <= j; ++i) same = same && ca[std::size_t(i)] == cb[std::size_t(i)];
        if (le && !same) below_pairs.push_back({a, b});
      }
    }
    auto add_common_rows = [&](LpProblem& p, std::size_t nx, bool with_tau) {
      std::size_t width = nx + (with_tau ? 1 : 0);
      for (std::size_t t = 0; t < nx; ++t) {
        std::vector<double> row(width, 0.0);
        row[t] = 1.0;
        p.add_row(std::move(row), LpProblem::Rel::Le, 1.0);
      }
      for (auto [lo, hi] : below_pairs) {
        std::vector<double> row(width, 0.0);
        row[lo] = 1.0;
        row[hi] = -1.0;
        p.add_row(std::move(row), LpProblem::Rel::Le, 0.0);
      }
    };
    // stage A: restore the maximin value over the tie block
    LpProblem a;
    std::size_t nx = ties.size();
    a.c.assign(nx + 1, 0.0);
    a.c[nx] = -1.0;  // max tau
    for (int i = 0; i < j; ++i) {
      std::vector<double> row(nx + 1, 0.0);
      for (std::size_t t = 0; t < nx; ++t) row[t] = c[std::size_t(i)][t];
      row[nx] = -1.0;
      a.add_row(std::move(row), LpProblem::Rel::Ge, -base[std::size_t(i)]);
    }
    add_common_rows(a, nx, true);
    LpResult ra = lp_solve(a);
    require(ra.status == LpResult::Status::Optimal, ErrorKind::Internal,
            "tie LP (maximin stage) failed");
    double tau = -ra.objective;
    // stage B: among maximin completions, recommend as much as possible;
    // the slack absorbs stage A's solver tolerance
    LpProblem bq;
    bq.c.assign(nx, -1.0);
    for (int i = 0; i < j; ++i) {
      std::vector<double> row(nx, 0.0);
      for (std::size_t t = 0; t < nx; ++t) row[t] = c[std::size_t(i)][t];
      bq.add_row(std::move(row), LpProblem::Rel::Ge, tau - base[std::size_t(i)] - 1e-9);
    }
    add_common_rows(bq, nx, false);
    LpResult rb = lp_solve(bq);
    require(rb.status == LpResult::Status::Optimal, ErrorKind::Internal,
            "tie LP (completion stage) failed");
    for (std::size_t t = 0; t < nx; ++t)
      pi[std::size_t(ties[t])] = std::min(1.0, std::max(0.0, rb.x[t]));
  }

  // postcondition: the policy earns >= value - 1e-9 against every pure agent
  double lam = std::numeric_limits<double>::infinity();
  for (int i = 0; i < j; ++i) {
    double payoff = 0;
    for (i64 d = 0; d < D; ++d)
      payoff += P[std::size_t(d)] * pi[std::size_t(d)] *
                (m[std::size_t(j)][std::size_t(d)] - m[std::size_t(i)][std::size_t(d)]);
    lam = std::min(lam, payoff);
  }
  require(lam >= sol.value - 1e-9, ErrorKind::Internal,
          "constructed policy does not achieve the game value");

  sol.policy.arm = j;
  sol.policy.depth = N;
  sol.policy.rule = std::make_shared<TableRule>(std::move(pi), j + 1, i64(N + 1));
  sol.policy.meta.method = "game-lp";
  sol.policy.meta.lambda_achieved = lam;
  sol.policy.meta.q_star = sol.q_star;
  return sol;
}

PaddedPolicy empirical_comparison_policy(const ProblemInstance& inst, int j, i64 N,
                                         std::span<const double> q, const GameOptions& opt) {
  require(j >= 1 && j < inst.K(), ErrorKind::Validation, "policy needs 1 <= j < K");
  require(N >= 1, ErrorKind::Validation, "empirical comparison needs N >= 1");
  check_simplex(q, std::size_t(j));
  PaddedPolicy p;
  p.arm = j;
  p.depth = N;
  p.rule = std::make_shared<CompareRule>(std::vector<double>(q.begin(), q.end()), j);
  p.meta.method = "empirical-comparison";
  p.meta.q_star.assign(q.begin(), q.end());
  // exact achieved padding when the joint space is small enough
  std::vector<CountLaw> laws = laws_for(inst, j, N, 0);
  if (joint_size(laws) <= opt.exact_cap) {
    std::vector<double> payoff(std::size_t(j), 0.0);
    for_each_outcome(laws, [&](std::span<const i64> counts, double prob) {
      if (prob == 0) return;
      double pi = p.prob(counts);
      if (pi == 0) return;
      double mj = laws[std::size_t(j)].mean[std::size_t(counts[std::size_t(j)])];
      for (int i = 0; i < j; ++i)
        payoff[std::size_t(i)] +=
            prob * pi * (mj - laws[std::size_t(i)].mean[std::size_t(counts[std::size_t(i)])]);
    });
    p.meta.lambda_achieved = *std::min_element(payoff.begin(), payoff.end());
  }
  return p;
}

PaddedPolicy beta_efficient_policy(int j, i64 N, int M, std::span<const ArmPrior> actual,
                                   std::uint64_t seed, const GameOptions& opt) {
  require(j >= 1 && j < int(actual.size()), ErrorKind::Validation, "beta policy needs 1 <= j < K");
  require(M >= 1, ErrorKind::Validation, "M must be >= 1");
  for (int i = 0; i <= j; ++i) {
    const ArmPrior& a = actual[std::size_t(i)];
    require(a.is_beta() && a.a() >= 1.0 && a.a() <= double(M) && a.b() >= 1.0 &&
                a.b() <= double(M),
            ErrorKind::Validation, "beta_efficient_policy needs Beta priors in [1, M]");
  }
  ArmPrior worst_hi = ArmPrior::beta(double(M), 1.0);  // stochastically largest
  ArmPrior worst_lo = ArmPrior::beta(1.0, double(M));  // stochastically smallest
  CountLaw hi_law = worst_hi.count_law(N, 0);
  CountLaw lo_law = worst_lo.count_law(N, 0);

  std::vector<std::vector<std::vector<std::pair<i64, double>>>> cond(std::size_t(j) + 1);
  for (int i = 0; i < j; ++i) {
    CountLaw act = actual[std::size_t(i)].count_law(N, 0);
    CountCoupling cc = count_coupling(hi_law, act);  // worst case dominates the actual law
    require(cc.dominates, ErrorKind::Internal, "Beta(M,1) must dominate the actual arm");
    cond[std::size_t(i)] = std::move(cc.hi_given_lo);  // fake | true, fake >= true
  }
  {
    CountLaw act = actual[std::size_t(j)].count_law(N, 0);
    CountCoupling cc = count_coupling(act, lo_law);  // actual dominates Beta(1,M)
    require(cc.dominates, ErrorKind::Internal, "the actual arm must dominate Beta(1,M)");
    cond[std::size_t(j)] = std::move(cc.lo_given_hi);  // fake | true, fake <= true
  }
  std::vector<std::vector<double>> fake_lower(std::size_t(j), hi_law.mean);
  PaddedPolicy p;
  p.arm = j;
  p.depth = N;
  p.rule = std::make_shared<CoupledCompareRule>(j, std::move(cond), std::move(fake_lower),
                                                lo_law.mean);
  p.meta.method = "beta-efficient";
  p.meta.seed = seed;
  p.meta.q_star.assign(std::size_t(j), 1.0 / double(j));
  (void)opt;
  return p;
}

PaddedPolicy transform_policy(const ProblemInstance& inst, const PaddedPolicy& base, i64 N0) {
  require(base.zeros_depth == 0, ErrorKind::Validation, "base policy is already transformed");
  int j = base.arm;
  require(N0 >= 0, ErrorKind::Validation, "negative zeros depth");
  if (N0 == 0) return base;  // empty conditioning
  double pz = 1;
  for (int i = 0; i < j; ++i) pz *= inst.arm(i).zeros_prob(N0);
  require(pz > 0, ErrorKind::ImpossibleObservation,
          "impossible observation: Pr[ZEROS] = 0");
  std::vector<std::vector<std::vector<std::pair<i64, double>>>> cond(static_cast<std::size_t>(j));
  bool identity = true;
  for (int i = 0; i < j; ++i) {
    CountLaw unc = inst.arm(i).count_law(base.depth, 0);
    CountLaw zc = inst.arm(i).count_law(base.depth, N0);
    CountCoupling cc = count_coupling(unc, zc);
    require(cc.dominates, ErrorKind::Internal,
            "unconditional count law must dominate the zeros-conditioned law");
    for (std::size_t s = 0; s < cc.hi_given_lo.size() && identity; ++s)
      identity = cc.hi_given_lo[s].size() == 1 && cc.hi_given_lo[s][0].first == i64(s);
    cond[std::size_t(i)] = std::move(cc.hi_given_lo);
  }
  PaddedPolicy p;
  p.arm = j;
  p.depth = base.depth;
  p.zeros_depth = N0;
  if (identity) {
    p.rule = base.rule;  // degenerate conditioning: transform is the identity
  } else {
    p.rule = std::make_shared<TransformedRule>(base.rule, j, std::move(cond));
  }
  p.meta = base.meta;
  p.meta.method = base.meta.method + "+zeros-transform";
  return p;
}

PaddedPolicy easy_exploit_policy(const ProblemInstance& inst, int j, i64 n_pad) {
  require(j >= 0 && j < inst.K(), ErrorKind::Validation, "arm out of range");
  require(n_pad >= 1, ErrorKind::Validation, "need n_pad >= 1");
  {
    std::vector<ArmPrior> distinct;
    for (const ArmPrior& a : inst.arms()) {
      bool seen = false;
      for (const ArmPrior& d : distinct) seen = seen || (d == a);
      if (!seen) distinct.push_back(a);
    }
    EasyHardReport eh = classify_easy_hard(distinct, 0.5);
    require(eh.easy_margin > 0 && eh.nd_margin > 0, ErrorKind::Validation,
            "easy-exploit policy needs a delta-easy, delta-non-dominant instance");
  }
  PaddedPolicy p;
  p.arm = j;
  p.depth = n_pad;
  CountLaw law = inst.arm(j).count_law(n_pad, 0);
  double target = (j > 0) ? inst.prior_mean(0) : -1.0;
  i64 threshold = n_pad + 1;
  for (i64 s = 0; s <= i64(law.mean.size()) - 1; ++s) {
    if (law.mean[std::size_t(s)] >= target) {
      threshold = s;
      break;
    }
  }
  p.rule = std::make_shared<ThresholdRule>(j, threshold);
  p.meta.method = "easy-exploit";
  return p;
}

PaddedPolicy always_recommend_policy(int j) {
  PaddedPolicy p;
  p.arm = j;
  p.depth = 0;
  p.rule = std::make_shared<ConstRule>(1.0);
  p.meta.method = "always-recommend";
  p.meta.lambda_achieved = 0;
  return p;
}

PolicyAudit audit_policy(const ProblemInstance& inst, const PaddedPolicy& policy,
                         const GameOptions& opt) {
  int j = policy.arm;
  i64 N = policy.depth;
  i64 z = policy.zeros_depth;
  int K = inst.K();
  std::vector<CountLaw> laws = laws_for(inst, j, std::max<i64>(N, 0), z);
  require(joint_size(laws) <= opt.exact_cap, ErrorKind::TooLarge,
          "audit enumeration too large");

  std::vector<std::vector<double>> margin(std::size_t(K), std::vector<double>(std::size_t(K), 0.0));
  std::vector<double> play_prob(std::size_t(K), 0.0);
  PolicyAudit out;

  for_each_outcome(laws, [&](std::span<const i64> counts, double prob) {
    if (prob == 0) return;
    double pi = policy.prob(counts);
    // posterior means of every arm at this outcome
    std::vector<double> pm(static_cast<std::size_t>(K));
    for (int i = 0; i <= j; ++i)
      pm[std::size_t(i)] = laws[std::size_t(i)].mean[std::size_t(counts[std::size_t(i)])];
    for (int i = j + 1; i < K; ++i) pm[std::size_t(i)] = inst.prior_mean(i);
    auto credit = [&](int played, double w) {
      if (w <= 0) return;
      play_prob[std::size_t(played)] += prob * w;
      for (int i = 0; i < K; ++i) {
        if (i == played) continue;
        margin[std::size_t(played)][std::size_t(i)] +=
            prob * w * (pm[std::size_t(played)] - pm[std::size_t(i)]);
      }
    };
    credit(j, pi);
    if (pi < 1.0 && policy.exploit_on_abstain) {
      int a = 0;
      for (int i = 1; i < K; ++i)
        if (pm[std::size_t(i)] > pm[std::size_t(a)]) a = i;
      credit(a, 1.0 - pi);
    }
  });

  out.recommend_prob = play_prob[std::size_t(j)];
  out.pad_margin = std::numeric_limits<double>::infinity();
  out.higher_margin = std::numeric_limits<double>::infinity();
  out.bic_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i < j; ++i)
    out.pad_margin = std::min(out.pad_margin, margin[std::size_t(j)][std::size_t(i)]);
  for (int i = j + 1; i < K; ++i)
    out.higher_margin = std::min(out.higher_margin, margin[std::size_t(j)][std::size_t(i)]);
  for (int l = 0; l < K; ++l) {
    if (play_prob[std::size_t(l)] <= 0) continue;
    for (int i = 0; i < K; ++i)
      if (i != l) out.bic_min = std::min(out.bic_min, margin[std::size_t(l)][std::size_t(i)]);
  }

  // monotone recommendation over the full table
  {
    std::vector<i64> sizes(std::size_t(j) + 1);
    for (int i = 0; i <= j; ++i) sizes[std::size_t(i)] = i64(laws[std::size_t(i)].prob.size());
    std::vector<i64> counts(std::size_t(j) + 1, 0);
    bool done = false;
    while (!done && out.monotone) {
      double here = policy.prob(counts);
      for (int i = 0; i <= j && out.monotone; ++i) {
        if (counts[std::size_t(i)] + 1 >= sizes[std::size_t(i)]) continue;
        counts[std::size_t(i)] += 1;
        double up = policy.prob(counts);
        counts[std::size_t(i)] -= 1;
        if (i == j) {
          if (up < here - 1e-12) out.monotone = false;
        } else {
          if (up > here + 1e-12) out.monotone = false;
        }
      }
      std::size_t i = 0;
      for (; i <= std::size_t(j); ++i) {
        if (++counts[i] < sizes[i]) break;
        counts[i] = 0;
      }
      done = (i == std::size_t(j) + 1);
    }
  }
  return out;
}

}  // namespace bic
