#include "bicbandit/params.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "bicbandit/errors.hpp"

namespace bic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Arms with identical priors share one weight; the minimizer of a convex,
// permutation-symmetric objective is uniform within each group.
struct Groups {
  std::vector<DiscreteDist> avg;  // law of the group average
  std::vector<int> size;
  std::vector<std::vector<int>> members;
};

Groups group_arms(std::span<const ArmPrior> arms, const ComputeOptions& opt) {
  Groups g;
  std::vector<const ArmPrior*> reps;
  for (int i = 0; i < int(arms.size()); ++i) {
    int found = -1;
    for (int k = 0; k < int(reps.size()); ++k)
      if (*reps[k] == arms[i]) {
        found = k;
        break;
      }
    if (found < 0) {
      reps.push_back(&arms[i]);
      g.size.push_back(1);
      g.members.push_back({i});
    } else {
      g.size[found] += 1;
      g.members[found].push_back(i);
    }
  }
  for (int k = 0; k < int(reps.size()); ++k) {
    DiscreteDist base = reps[k]->to_dist(opt.beta_grid);
    std::vector<const DiscreteDist*> parts(g.size[k], &base);
    std::vector<double> w(g.size[k], 1.0 / double(g.size[k]));
    g.avg.push_back(weighted_sum(parts, w, opt.regrid_threshold, opt.regrid_points));
  }
  return g;
}

DiscreteDist mix_of(const Groups& g, const std::vector<double>& w, const ComputeOptions& opt) {
  std::vector<const DiscreteDist*> parts;
  std::vector<double> ww;
  for (std::size_t k = 0; k < g.avg.size(); ++k) {
    if (w[k] == 0) continue;
    parts.push_back(&g.avg[k]);
    ww.push_back(w[k]);
  }
  return weighted_sum(parts, ww, opt.regrid_threshold, opt.regrid_points);
}

DiscreteDist mix_excluding(const Groups& g, const std::vector<double>& w, std::size_t skip,
                           const ComputeOptions& opt) {
  std::vector<const DiscreteDist*> parts;
  std::vector<double> ww;
  for (std::size_t k = 0; k < g.avg.size(); ++k) {
    if (k == skip || w[k] == 0) continue;
    parts.push_back(&g.avg[k]);
    ww.push_back(w[k]);
  }
  return weighted_sum(parts, ww, opt.regrid_threshold, opt.regrid_points);
}

std::vector<double> expand_group_weights(const Groups& g, const std::vector<double>& w,
                                         std::size_t total_arms) {
  std::vector<double> q(total_arms, 0.0);
  for (std::size_t k = 0; k < g.members.size(); ++k)
    for (int i : g.members[k]) q[std::size_t(i)] = w[k] / double(g.size[k]);
  return q;
}

}  // namespace

GapMinimum minimize_gap_over_simplex(const ArmPrior& j_prior, std::span<const ArmPrior> others,
                                     const ComputeOptions& opt) {
  require(!others.empty(), ErrorKind::Validation, "gap minimization needs at least one arm");
  Groups g = group_arms(others, opt);
  DiscreteDist y = j_prior.to_dist(opt.beta_grid);
  std::size_t G = g.avg.size();

  auto eval = [&](const std::vector<double>& w) {
    return expected_positive_diff(y, mix_of(g, w, opt));
  };

  std::vector<double> w(G, 1.0 / double(G));
  double best = eval(w);
  std::vector<double> best_w = w;
  if (G > 1) {
    // projected subgradient, step 1/sqrt(t)
    std::vector<double> cur = w;
    for (int t = 1; t <= opt.subgrad_iters; ++t) {
      std::vector<double> grad(G);
      for (std::size_t k = 0; k < G; ++k) {
        DiscreteDist rest = mix_excluding(g, cur, k, opt);
        grad[k] = -cross_moment_indicator(g.avg[k], cur[k], rest, y);
      }
      double step = 1.0 / std::sqrt(double(t));
      for (std::size_t k = 0; k < G; ++k) cur[k] -= step * grad[k];
      project_to_simplex(cur);
      double v = eval(cur);
      if (v < best) {
        best = v;
        best_w = cur;
      }
    }
    // vertices can beat the interior when the optimum is extreme
    for (std::size_t k = 0; k < G; ++k) {
      std::vector<double> vw(G, 0.0);
      vw[k] = 1.0;
      double v = eval(vw);
      if (v < best) {
        best = v;
        best_w = vw;
      }
    }
  }
  GapMinimum out;
  out.value = best;
  out.q = expand_group_weights(g, best_w, others.size());
  return out;
}

TsParams ts_warmstart_params(const ProblemInstance& inst, double c_ts,
                             const ComputeOptions& opt) {
  TsParams p;
  if (inst.K() == 1) {
    p.eps_ts = 1;
    p.delta_ts = 1;
    p.n_ts = 1;
    return p;
  }
  GapOptions gopt{opt.beta_grid, opt.regrid_threshold, opt.regrid_points};
  double eps = kInf;
  for (int i = 0; i < inst.K(); ++i) {
    for (int j = 0; j < inst.K(); ++j) {
      if (i == j) continue;
      std::vector<ArmPrior> other{inst.arm(j)};
      std::vector<double> q{1.0};
      eps = std::min(eps, expected_positive_gap(inst.arm(i), other, q, gopt));
    }
  }
  std::vector<double> win = best_arm_probs(inst.arms(), opt.beta_grid);
  double delta = *std::min_element(win.begin(), win.end());
  require(eps > 0, ErrorKind::NotExplorable, "not explorable: eps_ts = 0");
  require(delta > 0, ErrorKind::NotExplorable, "not explorable: delta_ts = 0");
  p.eps_ts = eps;
  p.delta_ts = delta;
  p.n_ts = std::max<i64>(1, i64(std::ceil(c_ts / (eps * eps) * std::log(1.0 / delta))));
  return p;
}

PaddedParams padded_params(const ProblemInstance& inst, double c_pad,
                           const ComputeOptions& opt) {
  require(inst.K() >= 2, ErrorKind::Validation, "padded parameters need K >= 2");
  PaddedParams p;
  p.g_pad = kInf;
  for (int j = 1; j < inst.K(); ++j) {
    std::span<const ArmPrior> others(inst.arms().data(), std::size_t(j));
    GapMinimum m = minimize_gap_over_simplex(inst.arm(j), others, opt);
    p.per_arm_value.push_back(m.value);
    p.per_arm_q.push_back(m.q);
    if (m.value < p.g_pad) {
      p.g_pad = m.value;
      p.witness_arm = j;
      p.witness_q = m.q;
    }
  }
  require(p.g_pad > 0, ErrorKind::NotExplorable, "arm not explorable: G_pad = 0");
  double g = p.g_pad;
  double raw = c_pad / (g * g) * std::log(1.0 / g);
  p.n_pad = std::max<i64>(1, i64(std::ceil(raw)));
  p.lambda = g / 10.0;
  return p;
}

BootstrapParams bootstrap_params(const ProblemInstance& inst, i64 n_cap) {
  BootstrapParams bp;
  int K = inst.K();
  if (K == 1) return bp;  // no pairs to separate
  double target = inst.prior_mean(K - 1);
  auto ok = [&](i64 n) {
    for (int i = 0; i < K - 1; ++i)
      if (!(inst.arm(i).zero_mean(n) < target)) return false;
    return true;
  };
  i64 lo = 1, hi = 1;
  if (!ok(n_cap)) {
    bp.n_boot = -1;
    bp.p_boot = 0;
    return bp;
  }
  while (!ok(hi)) {
    lo = hi + 1;
    hi *= 2;
    if (hi > n_cap) {
      hi = n_cap;
      break;
    }
  }
  while (lo < hi) {
    i64 mid = lo + (hi - lo) / 2;
    if (ok(mid))
      hi = mid;
    else
      lo = mid + 1;
  }
  bp.n_boot = lo;
  bp.p_boot = 1.0;
  for (int i = 0; i < K - 1; ++i) bp.p_boot *= inst.arm(i).zeros_prob(bp.n_boot);
  return bp;
}

namespace {

// max over group weights of (mu_q^0 - mu_j^0) / E[(mu_j - mu_q)_+] + 1 via
// Dinkelbach iterations; each inner problem is concave (linear minus t*convex).
struct RatioResult {
  double ratio = 0;
  bool infinite = false;
  std::vector<double> q;
};

RatioResult max_ratio_for_arm(const ProblemInstance& inst, int j, const ComputeOptions& opt) {
  RatioResult out;
  std::vector<ArmPrior> others;
  std::vector<int> other_idx;
  for (int i = 0; i < inst.K(); ++i) {
    if (i == j) continue;
    others.push_back(inst.arm(i));
    other_idx.push_back(i);
  }
  if (others.empty()) return out;
  Groups g = group_arms(others, opt);
  DiscreteDist y = inst.arm(j).to_dist(opt.beta_grid);
  double mu_j = inst.prior_mean(j);
  std::size_t G = g.avg.size();
  std::vector<double> gmean(G);
  for (std::size_t k = 0; k < G; ++k) gmean[k] = g.avg[k].mean();

  auto eplus = [&](const std::vector<double>& w) {
    return expected_positive_diff(y, mix_of(g, w, opt));
  };
  auto eminus = [&](const std::vector<double>& w) {
    return expected_positive_diff(mix_of(g, w, opt), y);
  };
  auto ratio_at = [&](const std::vector<double>& w) -> std::pair<double, bool> {
    double ep = eplus(w), em = eminus(w);
    if (ep <= 1e-300) {
      if (em <= 1e-12) return {0.0, false};  // 0/0 imposes no constraint
      return {kInf, true};
    }
    return {em / ep, false};
  };

  // seed with vertices
  std::vector<double> best_w(G, 0.0);
  double best = -1;
  for (std::size_t k = 0; k < G; ++k) {
    std::vector<double> vw(G, 0.0);
    vw[k] = 1.0;
    auto [r, infinite] = ratio_at(vw);
    if (infinite) {
      out.infinite = true;
      out.q = expand_group_weights(g, vw, others.size());
      // re-index below
      best_w = vw;
      best = kInf;
      break;
    }
    if (r > best) {
      best = r;
      best_w = vw;
    }
  }
  if (!out.infinite && G > 1) {
    // Dinkelbach on t = max (mu_q^0 - mu_j^0)/E_+ (note ratio = t + 1)
    std::vector<double> w = best_w;
    double t_cur = std::max(0.0, best - 1.0);
    for (int round = 0; round < 60; ++round) {
      // maximize L(w) - t*E_+(w) by projected supergradient ascent
      std::vector<double> cur = w;
      std::vector<double> inner_best_w = cur;
      auto inner_val = [&](const std::vector<double>& ww) {
        double L = -mu_j;
        for (std::size_t k = 0; k < G; ++k) L += ww[k] * gmean[k];
        return L - t_cur * eplus(ww);
      };
      double inner_best = inner_val(cur);
      for (int it = 1; it <= opt.subgrad_iters; ++it) {
        std::vector<double> grad(G);
        for (std::size_t k = 0; k < G; ++k) {
          DiscreteDist rest = mix_excluding(g, cur, k, opt);
          grad[k] = gmean[k] + t_cur * cross_moment_indicator(g.avg[k], cur[k], rest, y);
        }
        double step = 1.0 / std::sqrt(double(it));
        for (std::size_t k = 0; k < G; ++k) cur[k] += step * grad[k];
        project_to_simplex(cur);
        double v = inner_val(cur);
        if (v > inner_best) {
          inner_best = v;
          inner_best_w = cur;
        }
      }
      auto [r, infinite] = ratio_at(inner_best_w);
      if (infinite) {
        out.infinite = true;
        best_w = inner_best_w;
        break;
      }
      if (r > best + 1e-12) {
        best = r;
        best_w = inner_best_w;
        t_cur = std::max(0.0, r - 1.0);
        w = inner_best_w;
      } else {
        break;
      }
    }
  }
  out.ratio = out.infinite ? kInf : std::max(0.0, best);
  std::vector<double> q_others = expand_group_weights(g, best_w, others.size());
  out.q.assign(std::size_t(inst.K()), 0.0);
  for (std::size_t k = 0; k < q_others.size(); ++k)
    out.q[std::size_t(other_idx[k])] = q_others[k];
  return out;
}

}  // namespace

LowerBoundReport lower_bound(const ProblemInstance& inst, const ComputeOptions& opt) {
  LowerBoundReport rep;
  rep.k_component = double(inst.K());
  BootstrapParams bp = bootstrap_params(inst, opt.n_cap);
  rep.n_boot_component = bp.infinite() ? -1.0 : double(bp.n_boot);
  double best_ratio = 0;
  for (int j = 0; j < inst.K(); ++j) {
    RatioResult r = max_ratio_for_arm(inst, j, opt);
    double val = r.infinite ? kInf : r.ratio;
    if (val > best_ratio) {
      best_ratio = val;
      rep.witness_arm = j;
      rep.witness_q = r.q;
      if (r.infinite) break;
    }
  }
  rep.ratio_component = std::isinf(best_ratio) ? -1.0 : best_ratio;
  if (bp.infinite() || std::isinf(best_ratio)) {
    rep.infinite = true;
    rep.main_lb = kInf;
  } else {
    rep.main_lb = std::max({rep.k_component, double(bp.n_boot), best_ratio});
  }
  return rep;
}

EasyHardReport classify_easy_hard(std::span<const ArmPrior> collection, double delta,
                                  const ComputeOptions& opt) {
  require(!collection.empty(), ErrorKind::Validation, "empty collection");
  require(delta > 0 && delta < 1, ErrorKind::Validation, "delta must lie in (0,1)");
  EasyHardReport r;
  double phi = -kInf;
  for (const ArmPrior& p : collection) phi = std::max(phi, p.moments().mean);
  r.phi = phi;
  DiscreteDist phi_point = DiscreteDist::point(phi);
  r.easy_margin = kInf;
  r.nd_margin = kInf;
  bool hard = false;
  for (const ArmPrior& p : collection) {
    DiscreteDist d = p.to_dist(opt.beta_grid);
    r.easy_margin = std::min(r.easy_margin, expected_positive_diff(d, phi_point));
    if (p.moments().support_sup < phi - delta - 1e-12) hard = true;
  }
  for (const ArmPrior& pj : collection) {
    DiscreteDist mj = DiscreteDist::point(pj.moments().mean);
    for (const ArmPrior& pi : collection) {
      DiscreteDist di = pi.to_dist(opt.beta_grid);
      r.nd_margin = std::min(r.nd_margin, expected_positive_diff(mj, di));
    }
  }
  r.easy = r.easy_margin > delta;
  r.hard = hard;
  r.non_dominant = r.nd_margin >= delta;
  return r;
}

PriorParams compute_prior_params(const ProblemInstance& inst, const ParamOverrides& ov,
                                 const ComputeOptions& opt) {
  PriorParams p;
  p.K = inst.K();
  p.c_ts = ov.c_ts;
  p.c_pad = ov.c_pad;
  TsParams ts = ts_warmstart_params(inst, ov.c_ts, opt);
  p.eps_ts = ts.eps_ts;
  p.delta_ts = ts.delta_ts;
  p.n_ts = ts.n_ts;
  if (inst.K() >= 2) {
    PaddedParams pad = padded_params(inst, ov.c_pad, opt);
    p.g_pad = pad.g_pad;
    p.n_pad = pad.n_pad;
    p.lambda = ov.lambda.value_or(pad.lambda);
    p.g_pad_witness_arm = pad.witness_arm;
    p.g_pad_witness_q = pad.witness_q;
    p.per_arm_q = pad.per_arm_q;
  } else {
    p.g_pad = kInf;
    p.n_pad = 0;
    p.lambda = ov.lambda.value_or(0.0);
  }
  BootstrapParams bp = bootstrap_params(inst, ov.n_cap);
  p.n_boot = bp.infinite() ? -1 : bp.n_boot;
  p.n_boot_infinite = bp.infinite();
  p.p_boot = bp.p_boot;
  p.zeros_prob.assign(std::size_t(inst.K()), 1.0);
  if (!bp.infinite()) {
    double acc = 1.0;
    for (int j = 1; j < inst.K(); ++j) {
      acc *= inst.arm(j - 1).zeros_prob(bp.n_boot);
      p.zeros_prob[std::size_t(j)] = acc;
    }
  }
  // distinct priors of this instance form the collection for Alg3's margin
  std::vector<ArmPrior> distinct;
  for (const ArmPrior& a : inst.arms()) {
    bool seen = false;
    for (const ArmPrior& d : distinct) seen = seen || (d == a);
    if (!seen) distinct.push_back(a);
  }
  EasyHardReport eh;
  {
    // margins are delta-free; classify at a nominal delta just to reuse them
    eh = classify_easy_hard(distinct, 0.5, opt);
  }
  double margin = std::min(eh.easy_margin, eh.nd_margin);
  p.delta_easy = margin > 0 ? margin : 0.0;
  return p;
}

i64 growth_iters(double p0, double lambda) {
  require(lambda > 0, ErrorKind::Validation, "growth needs lambda > 0");
  require(p0 > 0, ErrorKind::NotExplorable, "growth needs a positive start probability");
  if (p0 >= 1.0) return 0;
  double approx = std::log(1.0 / p0) / std::log1p(lambda);
  require(approx < 5e7, ErrorKind::TooLarge, "growth loop has too many iterations");
  i64 n = 0;
  double p = p0;
  while (p < 1.0) {
    p = std::min(1.0, p * (1.0 + lambda));
    ++n;
  }
  return n;
}

i64 algorithm_floor(const PriorParams& params, Algorithm alg) {
  if (params.K == 1) return 1;
  require(!params.n_boot_infinite, ErrorKind::NotExplorable,
          "n_boot is infinite; the bootstrapping phase cannot be scheduled");
  switch (alg) {
    case Algorithm::Alg1:
      return std::max<i64>({1, params.n_boot, params.n_pad});
    case Algorithm::Alg2:
      return std::max<i64>(1, params.n_pad);
    case Algorithm::Alg3:
      require(params.delta_easy > 0, ErrorKind::Validation,
              "Alg3 requires a delta-easy, delta-non-dominant instance");
      return std::max<i64>({1, params.n_boot, params.n_pad});
  }
  return 1;
}

i64 rounds_budget(const PriorParams& params, int K, i64 N, Algorithm alg) {
  require(K == params.K, ErrorKind::Validation, "K mismatch with params");
  if (K == 1) return N;
  require(N >= algorithm_floor(params, alg), ErrorKind::Validation,
          "N below the algorithm's floor");
  double lambda = params.lambda;
  require(lambda > 0, ErrorKind::Validation, "lambda must be positive");
  switch (alg) {
    case Algorithm::Alg1: {
      i64 total = (2 * i64(K) - 1) * N;
      for (int j = 1; j < K; ++j) {
        double q = lambda * params.zeros_prob[std::size_t(j)];
        double pj = q / (1.0 + q);
        total += N * growth_iters(pj, lambda);
      }
      return total;
    }
    case Algorithm::Alg2: {
      i64 P = std::max(params.n_pad, params.n_boot);
      i64 L = std::max(N, P);
      i64 n_lambda = 1 + i64(std::ceil(1.0 / lambda));
      i64 total = L;
      for (int j = 1; j < K; ++j) {
        double q = lambda * params.zeros_prob[std::size_t(j)];
        double pj = q / (1.0 + q);
        total += (2 + growth_iters(pj, lambda)) * P;
      }
      total += i64(K) * n_lambda * L;
      return total;
    }
    case Algorithm::Alg3: {
      double l3 = params.delta_easy / 10.0;
      i64 n_lambda = 1 + i64(std::ceil(1.0 / l3));
      i64 total = i64(K) * params.n_boot;
      total += (2 + growth_iters(params.p_boot, l3)) * params.n_pad;
      total += i64(K) * n_lambda * N;
      return total;
    }
  }
  return 0;
}

i64 rounds_budget_clamped(const PriorParams& params, int K, i64 N, Algorithm alg) {
  if (K == 1) return std::max<i64>(N, 1);
  return rounds_budget(params, K, std::max(N, algorithm_floor(params, alg)), alg);
}

}  // namespace bic
