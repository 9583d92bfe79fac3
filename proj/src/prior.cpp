#include "bicbandit/prior.hpp"

#include <algorithm>
#include <cmath>

#include "bicbandit/errors.hpp"

namespace bic {

ArmPrior ArmPrior::beta(double a, double b) {
  require(a > 0 && b > 0, ErrorKind::Validation, "Beta prior needs a > 0 and b > 0");
  ArmPrior p;
  p.kind_ = Kind::Beta;
  p.a_ = a;
  p.b_ = b;
  return p;
}

ArmPrior ArmPrior::atoms(std::vector<Atom> support) {
  require(!support.empty(), ErrorKind::Validation, "empty finite support");
  std::sort(support.begin(), support.end(),
            [](const Atom& x, const Atom& y) { return x.value < y.value; });
  double total = 0;
  for (std::size_t i = 0; i < support.size(); ++i) {
    const Atom& a = support[i];
    require(a.value >= -1e-12 && a.value <= 1 + 1e-12, ErrorKind::Validation,
            "atom value outside [0,1]");
    require(a.prob >= 0 && a.prob <= 1 + 1e-12, ErrorKind::Validation,
            "atom probability outside [0,1]");
    if (i > 0)
      require(a.value - support[i - 1].value > 1e-12, ErrorKind::Validation,
              "atom values must be strictly ascending (merge duplicates first)");
    total += a.prob;
  }
  require(std::fabs(total - 1.0) <= 1e-12, ErrorKind::Validation,
          "atom probabilities must sum to 1 within 1e-12");
  ArmPrior p;
  p.kind_ = Kind::FiniteSupport;
  for (Atom& a : support) a.value = std::min(1.0, std::max(0.0, a.value));
  p.support_ = std::move(support);
  return p;
}

Moments ArmPrior::moments() const {
  Moments m;
  if (kind_ == Kind::Beta) {
    double s = a_ + b_;
    m.mean = a_ / s;
    m.variance = a_ * b_ / (s * s * (s + 1.0));
    m.support_inf = 0.0;
    m.support_sup = 1.0;
  } else {
    for (const Atom& a : support_) m.mean += a.value * a.prob;
    for (const Atom& a : support_)
      m.variance += (a.value - m.mean) * (a.value - m.mean) * a.prob;
    m.support_inf = support_.front().value;
    m.support_sup = support_.back().value;
  }
  return m;
}

ArmPrior ArmPrior::updated(i64 n, i64 s) const {
  require(n >= 0 && s >= 0 && s <= n, ErrorKind::Validation,
          "posterior update needs 0 <= s <= n");
  if (kind_ == Kind::Beta) return beta(a_ + double(s), b_ + double(n - s));
  std::vector<Atom> out;
  double total = 0;
  for (const Atom& a : support_) {
    double w = a.prob * std::pow(a.value, double(s)) * std::pow(1.0 - a.value, double(n - s));
    if (w > 0) {
      out.push_back({a.value, w});
      total += w;
    }
  }
  require(total > 0, ErrorKind::ImpossibleObservation,
          "impossible observation: likelihood mass is zero");
  for (Atom& a : out) a.prob /= total;
  return atoms(std::move(out));
}

CountLaw ArmPrior::count_law(i64 N, i64 zeros_prefix) const {
  require(N >= 0 && zeros_prefix >= 0, ErrorKind::Validation, "negative sample count");
  CountLaw law;
  law.samples = N;
  law.zeros = std::min(zeros_prefix, N);
  i64 free = N - law.zeros;

  if (zeros_prefix > 0) {
    double pz = zeros_prob(std::min(zeros_prefix, N));
    require(pz > 0, ErrorKind::ImpossibleObservation,
            "impossible observation: zero-reward prefix has probability 0");
  }

  if (kind_ == Kind::Beta) {
    double az = a_, bz = b_ + double(law.zeros);
    law.prob.resize(free + 1);
    law.mean.resize(free + 1);
    double lb0 = log_beta_fn(az, bz);
    for (i64 s = 0; s <= free; ++s) {
      law.prob[s] = std::exp(log_choose(free, s) + log_beta_fn(az + double(s), bz + double(free - s)) - lb0);
      law.mean[s] = (a_ + double(s)) / (a_ + b_ + double(N));
    }
  } else {
    // weights after conditioning the zero prefix
    std::vector<double> w(support_.size());
    double W = 0;
    for (std::size_t k = 0; k < support_.size(); ++k) {
      w[k] = support_[k].prob * std::pow(1.0 - support_[k].value, double(law.zeros));
      W += w[k];
    }
    require(W > 0, ErrorKind::ImpossibleObservation,
            "impossible observation: zero-reward prefix has probability 0");
    law.prob.assign(free + 1, 0.0);
    law.mean.assign(free + 1, 0.0);
    for (i64 s = 0; s <= free; ++s) {
      double num = 0, den = 0;
      for (std::size_t k = 0; k < support_.size(); ++k) {
        double v = support_[k].value;
        double binom = std::exp(log_choose(free, s)) * std::pow(v, double(s)) *
                       std::pow(1.0 - v, double(free - s));
        law.prob[s] += (w[k] / W) * binom;
        // posterior mean uses total counts: s successes, N - s failures
        double lik = support_[k].prob * std::pow(v, double(s)) * std::pow(1.0 - v, double(N - s));
        num += lik * v;
        den += lik;
      }
      law.mean[s] = (den > 0) ? num / den : -1.0;
    }
    // unreachable counts (zero likelihood) inherit a neighbor's mean so the
    // mean stays monotone in s across the whole table
    for (i64 s = 1; s <= free; ++s)
      if (law.mean[s] < 0) law.mean[s] = law.mean[s - 1];
    for (i64 s = free - 1; s >= 0; --s)
      if (law.mean[s] < 0) law.mean[s] = law.mean[s + 1];
  }
  // normalize away float drift
  double total = 0;
  for (double p : law.prob) total += p;
  for (double& p : law.prob) p /= total;
  return law;
}

double ArmPrior::zeros_prob(i64 n) const {
  if (n <= 0) return 1.0;
  if (kind_ == Kind::Beta) {
    double p = 1.0;
    for (i64 k = 0; k < n; ++k) p *= (b_ + double(k)) / (a_ + b_ + double(k));
    return p;
  }
  double p = 0;
  for (const Atom& a : support_) p += a.prob * std::pow(1.0 - a.value, double(n));
  return p;
}

double ArmPrior::zero_mean(i64 n) const {
  if (kind_ == Kind::Beta) return a_ / (a_ + b_ + double(n));
  // normalize by the largest survival factor so big n cannot underflow
  double best = 0;
  for (const Atom& a : support_)
    if (a.prob > 0) best = std::max(best, 1.0 - a.value);
  require(best > 0, ErrorKind::ImpossibleObservation,
          "impossible observation: zero-reward prefix has probability 0");
  double num = 0, den = 0;
  for (const Atom& a : support_) {
    double w = a.prob * std::pow((1.0 - a.value) / best, double(n));
    num += w * a.value;
    den += w;
  }
  return num / den;
}

DiscreteDist ArmPrior::to_dist(int grid) const {
  if (kind_ == Kind::FiniteSupport) return DiscreteDist::from_atoms(support_);
  require(grid >= 2, ErrorKind::Validation, "beta grid must have >= 2 cells");
  std::vector<Atom> out;
  out.reserve(grid);
  double mean_scale = a_ / (a_ + b_);
  double prev_cdf = 0, prev_m1 = 0;
  for (int k = 1; k <= grid; ++k) {
    double x = double(k) / double(grid);
    double c = (k == grid) ? 1.0 : beta_cdf(a_, b_, x);
    double m1 = (k == grid) ? mean_scale : mean_scale * beta_cdf(a_ + 1.0, b_, x);
    double mass = c - prev_cdf;
    double m = m1 - prev_m1;
    if (mass > 1e-300) out.push_back({m / mass, mass});
    prev_cdf = c;
    prev_m1 = m1;
  }
  return DiscreteDist::from_atoms(std::move(out));
}

double ArmPrior::sample_mu(Rng& rng) const {
  if (kind_ == Kind::Beta) return rng.beta(a_, b_);
  std::vector<double> w(support_.size());
  for (std::size_t k = 0; k < support_.size(); ++k) w[k] = support_[k].prob;
  return support_[rng.categorical(w)].value;
}

double ArmPrior::posterior_sample(Rng& rng, i64 n, i64 s) const {
  if (kind_ == Kind::Beta) return rng.beta(a_ + double(s), b_ + double(n - s));
  std::vector<double> w(support_.size());
  double total = 0;
  for (std::size_t k = 0; k < support_.size(); ++k) {
    double v = support_[k].value;
    w[k] = support_[k].prob * std::pow(v, double(s)) * std::pow(1.0 - v, double(n - s));
    total += w[k];
  }
  require(total > 0, ErrorKind::ImpossibleObservation, "posterior_sample: impossible data");
  return support_[rng.categorical(w)].value;
}

bool ArmPrior::operator==(const ArmPrior& o) const {
  if (kind_ != o.kind_) return false;
  if (kind_ == Kind::Beta) return a_ == o.a_ && b_ == o.b_;
  if (support_.size() != o.support_.size()) return false;
  for (std::size_t k = 0; k < support_.size(); ++k)
    if (support_[k].value != o.support_[k].value || support_[k].prob != o.support_[k].prob)
      return false;
  return true;
}

Moments prior_moments(const ArmPrior& p) { return p.moments(); }

ArmPrior posterior_update(const ArmPrior& p, i64 n, i64 s) { return p.updated(n, s); }

MeanDist posterior_mean_dist(const ArmPrior& p, i64 N, i64 zeros_prefix, int arm) {
  CountLaw law = p.count_law(N, zeros_prefix);
  std::vector<Atom> atoms(law.prob.size());
  for (std::size_t s = 0; s < law.prob.size(); ++s) atoms[s] = {law.mean[s], law.prob[s]};
  MeanDist d;
  d.dist = DiscreteDist::from_atoms(std::move(atoms));
  d.arm = arm;
  d.samples = N;
  d.zeros = zeros_prefix;
  return d;
}

std::pair<bool, std::optional<Coupling>> dominance_and_coupling(const MeanDist& hi,
                                                                const MeanDist& lo) {
  const auto& ha = hi.dist.atoms();
  const auto& la = lo.dist.atoms();
  // pointwise CDF comparison over the union of supports
  {
    std::vector<double> xs;
    for (const Atom& a : ha) xs.push_back(a.value);
    for (const Atom& a : la) xs.push_back(a.value);
    std::sort(xs.begin(), xs.end());
    for (double x : xs)
      if (hi.dist.cdf(x) > lo.dist.cdf(x) + 1e-12) return {false, std::nullopt};
  }
  // inverse-CDF pairing on the refinement of both breakpoint sets
  Coupling c;
  std::size_t i = 0, j = 0;
  double rem_hi = ha[0].prob, rem_lo = la[0].prob;
  while (i < ha.size() && j < la.size()) {
    double w = std::min(rem_hi, rem_lo);
    if (w > 0) c.cells.push_back({ha[i].value, la[j].value, w});
    rem_hi -= w;
    rem_lo -= w;
    if (rem_hi <= 0) {
      ++i;
      if (i < ha.size()) rem_hi = ha[i].prob;
    }
    if (rem_lo <= 0) {
      ++j;
      if (j < la.size()) rem_lo = la[j].prob;
    }
  }
  return {true, std::move(c)};
}

DiscreteDist Coupling::partner_given_lo(double lo_value) const {
  std::vector<Atom> out;
  for (const Cell& c : cells)
    if (std::fabs(c.lo - lo_value) <= 1e-12) out.push_back({c.hi, c.prob});
  require(!out.empty(), ErrorKind::Validation, "value not in the coupled support");
  return DiscreteDist::from_atoms(std::move(out));
}

DiscreteDist Coupling::partner_given_hi(double hi_value) const {
  std::vector<Atom> out;
  for (const Cell& c : cells)
    if (std::fabs(c.hi - hi_value) <= 1e-12) out.push_back({c.lo, c.prob});
  require(!out.empty(), ErrorKind::Validation, "value not in the coupled support");
  return DiscreteDist::from_atoms(std::move(out));
}

CountCoupling count_coupling(const CountLaw& hi, const CountLaw& lo) {
  auto cdf = [](const CountLaw& l, std::size_t upto) {
    double c = 0;
    for (std::size_t s = 0; s <= upto && s < l.prob.size(); ++s) c += l.prob[s];
    return c;
  };
  CountCoupling cc;
  cc.dominates = true;
  std::size_t m = std::max(hi.prob.size(), lo.prob.size());
  for (std::size_t s = 0; s + 1 < m; ++s) {
    if (cdf(hi, s) > cdf(lo, s) + 1e-12) {
      cc.dominates = false;
      return cc;
    }
  }
  cc.hi_given_lo.resize(lo.prob.size());
  cc.lo_given_hi.resize(hi.prob.size());
  // overlap of CDF intervals [F(s-1), F(s))
  double lo_left = 0;
  for (std::size_t sl = 0; sl < lo.prob.size(); ++sl) {
    double lo_right = lo_left + lo.prob[sl];
    double hi_left = 0;
    for (std::size_t sh = 0; sh < hi.prob.size(); ++sh) {
      double hi_right = hi_left + hi.prob[sh];
      double overlap = std::min(lo_right, hi_right) - std::max(lo_left, hi_left);
      if (overlap > 1e-15) {
        if (lo.prob[sl] > 0)
          cc.hi_given_lo[sl].push_back({i64(sh), overlap / lo.prob[sl]});
        if (hi.prob[sh] > 0)
          cc.lo_given_hi[sh].push_back({i64(sl), overlap / hi.prob[sh]});
      }
      hi_left = hi_right;
    }
    lo_left = lo_right;
  }
  return cc;
}

double expected_positive_gap(const ArmPrior& j_prior, std::span<const ArmPrior> others,
                             std::span<const double> q, const GapOptions& opt) {
  require(others.size() == q.size(), ErrorKind::Validation,
          "expected_positive_gap: weight count mismatch");
  double total = 0;
  for (double w : q) {
    require(w >= 0, ErrorKind::Validation, "negative weight in q");
    total += w;
  }
  require(std::fabs(total - 1.0) <= 1e-9, ErrorKind::Validation,
          "weights must sum to 1 within 1e-9");
  std::vector<DiscreteDist> own;
  std::vector<const DiscreteDist*> parts;
  std::vector<double> w;
  for (std::size_t i = 0; i < others.size(); ++i) {
    if (q[i] == 0) continue;
    own.push_back(others[i].to_dist(opt.beta_grid));
    w.push_back(q[i]);
  }
  parts.reserve(own.size());
  for (const auto& d : own) parts.push_back(&d);
  DiscreteDist mix = weighted_sum(parts, w, opt.regrid_threshold, opt.regrid_points);
  return expected_positive_diff(j_prior.to_dist(opt.beta_grid), mix);
}

ArmPrior discretize_truncated_gaussian(double nu, double sigma, int grid_points) {
  require(sigma > 0, ErrorKind::Validation, "sigma must be positive");
  require(grid_points >= 2, ErrorKind::Validation, "need at least 2 grid points");
  std::vector<Atom> atoms(grid_points);
  double total = 0;
  for (int k = 0; k < grid_points; ++k) {
    double v = double(k) / double(grid_points - 1);
    double z = (v - nu) / sigma;
    double w = std::exp(-0.5 * z * z);
    atoms[k] = {v, w};
    total += w;
  }
  require(total > 0, ErrorKind::Validation, "density vanished on the whole grid");
  for (Atom& a : atoms) a.prob /= total;
  // drop zero-weight endpoints so atom values stay strictly sorted & positive
  std::vector<Atom> kept;
  for (const Atom& a : atoms)
    if (a.prob > 0) kept.push_back(a);
  return ArmPrior::atoms(std::move(kept));
}

std::vector<double> best_arm_probs(std::span<const ArmPrior> arms, int beta_grid) {
  int K = int(arms.size());
  std::vector<double> out(K, 0.0);
  auto p_lt = [&](int l, double x) {  // Pr[mu_l < x]
    if (arms[l].is_beta()) return beta_cdf(arms[l].a(), arms[l].b(), x);
    double c = 0;
    for (const Atom& a : arms[l].support())
      if (a.value < x - 1e-12) c += a.prob;
    return c;
  };
  auto p_le = [&](int l, double x) {  // Pr[mu_l <= x]
    if (arms[l].is_beta()) return beta_cdf(arms[l].a(), arms[l].b(), x);
    double c = 0;
    for (const Atom& a : arms[l].support())
      if (a.value <= x + 1e-12) c += a.prob;
    return c;
  };
  for (int i = 0; i < K; ++i) {
    // A* = i  iff  mu_i > mu_l for l < i and mu_i >= mu_l for l > i
    auto win_prob = [&](double v) {
      double p = 1.0;
      for (int l = 0; l < K; ++l) {
        if (l == i) continue;
        p *= (l < i) ? p_lt(l, v) : p_le(l, v);
      }
      return p;
    };
    if (arms[i].is_beta()) {
      DiscreteDist d = arms[i].to_dist(beta_grid);
      for (const Atom& a : d.atoms()) out[i] += a.prob * win_prob(a.value);
    } else {
      for (const Atom& a : arms[i].support()) out[i] += a.prob * win_prob(a.value);
    }
  }
  return out;
}

}  // namespace bic
