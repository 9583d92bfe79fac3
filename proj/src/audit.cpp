#include "bicbandit/audit.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "bicbandit/errors.hpp"
#include "bicbandit/parallel.hpp"

namespace bic {

namespace {

// ---- models ----------------------------------------------------------------

// state layout: phase index | explored mask << 24 | predraw index << 40
class ScheduleBranchModel : public BranchModel {
 public:
  ScheduleBranchModel(const ProblemInstance& inst, const PhaseSchedule& sched)
      : inst_(inst), sched_(sched) {
    require(sched.K <= 16, ErrorKind::TooLarge, "exact audit supports K <= 16");
    for (const Phase& p : sched_.phases) {
      horizon_ += p.length;
      if (p.zeros_n0 > 0) depths_.push_back(p.zeros_n0);
      if (p.kind != Phase::Kind::Explore) depths_.push_back(p.depth);
    }
    for (const PaddedPolicy& p : sched_.policies)
      if (p.rule) depths_.push_back(p.depth);
    for (const PaddedPolicy& p : sched_.transformed)
      if (p.rule) depths_.push_back(p.depth);
    std::sort(depths_.begin(), depths_.end());
    depths_.erase(std::unique(depths_.begin(), depths_.end()), depths_.end());
    while (!depths_.empty() && depths_.front() <= 0) depths_.erase(depths_.begin());
    // enumerate the pre-drawn randomization
    if (sched_.alg == Algorithm::Alg3) {
      std::vector<std::vector<int>> perms;
      std::vector<int> base(std::size_t(sched_.K));
      for (int i = 0; i < sched_.K; ++i) base[std::size_t(i)] = i;
      do {
        perms.push_back(base);
      } while (std::next_permutation(base.begin(), base.end()));
      double n_slot_combos = std::pow(double(sched_.n_lambda), double(sched_.K));
      require(double(sched_.K) * double(perms.size()) * n_slot_combos <= 250000.0,
              ErrorKind::TooLarge, "too many Alg3 pre-draw combinations to enumerate");
      for (int j0 = 0; j0 < sched_.K; ++j0) {
        for (const auto& perm : perms) {
          std::vector<int> slots(std::size_t(sched_.K), 0);
          for (;;) {
            Alg3Draws d;
            d.j0 = j0;
            d.theta = perm;
            d.slots = slots;
            draws_.push_back(d);
            int i = 0;
            for (; i < sched_.K; ++i) {
              if (++slots[std::size_t(i)] < sched_.n_lambda) break;
              slots[std::size_t(i)] = 0;
            }
            if (i == sched_.K) break;
          }
        }
      }
    } else if (sched_.n_lambda > 0) {
      std::vector<int> slots(std::size_t(sched_.K), 0);
      require(std::pow(double(sched_.n_lambda), double(sched_.K)) <= 250000.0,
              ErrorKind::TooLarge, "too many slot combinations to enumerate");
      for (;;) {
        Alg3Draws d;
        d.slots = slots;
        draws_.push_back(d);
        int i = 0;
        for (; i < sched_.K; ++i) {
          if (++slots[std::size_t(i)] < sched_.n_lambda) break;
          slots[std::size_t(i)] = 0;
        }
        if (i == sched_.K) break;
      }
    } else {
      draws_.push_back(Alg3Draws{});
    }
  }

  int arms() const override { return sched_.K; }
  i64 horizon() const override { return horizon_; }
  std::vector<i64> read_depths() const override { return depths_; }
  bool reads_totals() const override { return false; }

  i64 block_len(std::uint64_t state) const override {
    std::size_t phase = state & 0xffffff;
    return sched_.phases[phase].length;
  }

  void expand(std::uint64_t state, const DataView& data, std::vector<Arc>& out) const override {
    std::size_t phase = state & 0xffffff;
    std::uint32_t mask = std::uint32_t((state >> 24) & 0xffff);
    std::size_t draw = std::size_t(state >> 40);
    std::vector<PhaseBranch> branches =
        resolve_phase(inst_, sched_, int(phase), data, mask, &draws_[draw]);
    for (const PhaseBranch& b : branches) {
      std::uint32_t m2 = mask;
      if (b.sets_explored) m2 |= (1u << b.arm);
      std::uint64_t next = (std::uint64_t(phase + 1) & 0xffffff) |
                           (std::uint64_t(m2) << 24) | (std::uint64_t(draw) << 40);
      out.push_back({b.prob, b.arm, next});
    }
  }

  std::vector<std::pair<double, std::uint64_t>> initial_states() const override {
    std::vector<std::pair<double, std::uint64_t>> init;
    double p = 1.0 / double(draws_.size());
    for (std::size_t d = 0; d < draws_.size(); ++d)
      init.push_back({p, std::uint64_t(d) << 40});
    return init;
  }

  const Alg3Draws& draw_at(std::size_t d) const { return draws_[d]; }

 private:
  const ProblemInstance& inst_;
  const PhaseSchedule& sched_;
  i64 horizon_ = 0;
  std::vector<i64> depths_;
  std::vector<Alg3Draws> draws_;
};

class ThompsonBranchModel : public BranchModel {
 public:
  ThompsonBranchModel(const ProblemInstance& inst, i64 horizon)
      : inst_(inst), horizon_(horizon) {}
  int arms() const override { return inst_.K(); }
  i64 horizon() const override { return horizon_; }
  std::vector<i64> read_depths() const override { return {}; }
  bool reads_totals() const override { return true; }
  i64 block_len(std::uint64_t) const override { return 1; }

  void expand(std::uint64_t state, const DataView& data, std::vector<Arc>& out) const override {
    std::vector<ArmPrior> posts;
    posts.reserve(std::size_t(inst_.K()));
    for (int i = 0; i < inst_.K(); ++i)
      posts.push_back(inst_.arm(i).updated(data.pulls(i), data.prefix_successes(i, -1)));
    std::vector<double> probs = best_arm_probs(posts);
    for (int i = 0; i < inst_.K(); ++i)
      if (probs[std::size_t(i)] > 0) out.push_back({probs[std::size_t(i)], i, state + 1});
  }

 private:
  const ProblemInstance& inst_;
  i64 horizon_;
};

// 3-round strategy for the +-eps coin pair: pull arm 0; then play arm 1 with
// probability 1 on reward 0 and 1/2 on reward 1; round 3 repeats with the
// coupled (complementary) coin so arm 1 is reached almost surely.
class DegeneratePairModel : public BranchModel {
 public:
  int arms() const override { return 2; }
  i64 horizon() const override { return 3; }
  std::vector<i64> read_depths() const override { return {1}; }
  bool reads_totals() const override { return false; }
  i64 block_len(std::uint64_t) const override { return 1; }

  void expand(std::uint64_t state, const DataView& data, std::vector<Arc>& out) const override {
    switch (state) {
      case 0:
        out.push_back({1.0, 0, 1});
        break;
      case 1: {
        i64 r1 = data.prefix_successes(0, 1);
        if (r1 == 0) {
          out.push_back({1.0, 1, 10});
        } else {
          out.push_back({0.5, 1, 11});  // coin low: arm 1 now
          out.push_back({0.5, 0, 12});  // coin high: arm 1 next round
        }
        break;
      }
      case 10:
        out.push_back({1.0, 1, 99});
        break;
      case 11:
        out.push_back({1.0, 0, 99});
        break;
      case 12:
        out.push_back({1.0, 1, 99});
        break;
      default:
        fail(ErrorKind::Internal, "degenerate strategy ran past its horizon");
    }
  }
};

// ---- exact enumeration engine ------------------------------------------------

// Per arm the key stores: pulls (capped), successes at each checkpoint, and
// the total success count when the model reads totals.
struct TrackLayout {
  std::vector<i64> depths;
  bool totals = false;
  i64 pull_cap = 0;  // pulls stored as min(pulls, pull_cap) unless totals
  int K = 0;
  std::size_t per_arm() const { return 1 + depths.size() + (totals ? 1 : 0); }
};

class EnumData : public DataView {
 public:
  EnumData(const TrackLayout& lay, const std::vector<i64>& key) : lay_(lay), key_(key) {}
  i64 pulls(int arm) const override { return key_[slot(arm, 0)]; }
  i64 prefix_successes(int arm, i64 depth) const override {
    if (depth == 0) return 0;
    if (depth < 0) {
      require(lay_.totals, ErrorKind::Internal, "model did not declare total reads");
      return key_[slot(arm, 1 + lay_.depths.size())];
    }
    for (std::size_t k = 0; k < lay_.depths.size(); ++k)
      if (lay_.depths[k] == depth) return key_[slot(arm, 1 + k)];
    fail(ErrorKind::Internal, "model read an undeclared prefix depth");
  }

 private:
  std::size_t slot(int arm, std::size_t field) const {
    return std::size_t(arm) * lay_.per_arm() + field;
  }
  const TrackLayout& lay_;
  const std::vector<i64>& key_;
};

// appends (new_key_suffix, probability) pairs for pulling `arm` L times
void reward_branches(const TrackLayout& lay, const std::vector<i64>& key, int arm, i64 L,
                     double mu, std::vector<std::pair<std::vector<i64>, double>>& out) {
  std::size_t base = std::size_t(arm) * lay.per_arm();
  i64 p = key[base];
  // windows between checkpoints intersected with (p, p+L]
  std::vector<i64> win_n;
  std::vector<std::size_t> win_first_cp;  // first checkpoint index the window feeds
  i64 prev = 0;
  for (std::size_t k = 0; k < lay.depths.size(); ++k) {
    i64 d = lay.depths[k];
    i64 n = std::max<i64>(0, std::min(d, p + L) - std::max(prev, p));
    if (n > 0) {
      win_n.push_back(n);
      win_first_cp.push_back(k);
    }
    prev = d;
  }
  i64 beyond = std::max<i64>(0, (p + L) - std::max(prev, p));
  if (lay.totals && beyond > 0) {
    win_n.push_back(beyond);
    win_first_cp.push_back(lay.depths.size());  // feeds only the total
  }
  i64 new_pulls = lay.totals ? p + L : std::min(lay.pull_cap, p + L);

  std::vector<std::pair<std::vector<i64>, double>> acc;
  {
    std::vector<i64> k0 = key;
    k0[base] = new_pulls;
    acc.push_back({std::move(k0), 1.0});
  }
  for (std::size_t w = 0; w < win_n.size(); ++w) {
    i64 n = win_n[w];
    std::vector<std::pair<std::vector<i64>, double>> next;
    for (auto& [k, pr] : acc) {
      for (i64 x = 0; x <= n; ++x) {
        double bw = std::exp(log_choose(n, x)) * std::pow(mu, double(x)) *
                    std::pow(1.0 - mu, double(n - x));
        if (bw <= 0) continue;
        std::vector<i64> k2 = k;
        for (std::size_t cp = win_first_cp[w]; cp < lay.depths.size(); ++cp)
          k2[base + 1 + cp] += x;
        if (lay.totals) k2[base + 1 + lay.depths.size()] += x;
        next.push_back({std::move(k2), pr * bw});
      }
    }
    acc.swap(next);
  }
  for (auto& kv : acc) out.push_back(std::move(kv));
}

struct EnumResult {
  std::vector<double> margins;  // [t*K*K + k*K + j]
  double mass_under = 0;        // probability some arm ends with < pull_target
  i64 horizon = 0;
  int K = 0;
};

EnumResult enumerate_model(const ProblemInstance& inst, const BranchModel& model,
                           i64 pull_target, const EnumOptions& opt) {
  int K = inst.K();
  require(K == model.arms(), ErrorKind::Validation, "model arm count mismatch");
  for (const ArmPrior& a : inst.arms())
    require(!a.is_beta(), ErrorKind::Validation,
            "exact enumeration needs FiniteSupport priors");
  TrackLayout lay;
  lay.depths = model.read_depths();
  lay.totals = model.reads_totals();
  lay.K = K;
  lay.pull_cap = pull_target;
  for (i64 d : lay.depths) lay.pull_cap = std::max(lay.pull_cap, d);
  if (lay.pull_cap == 0) lay.pull_cap = 1;

  i64 H = model.horizon();
  EnumResult res;
  res.horizon = H;
  res.K = K;
  res.margins.assign(std::size_t(H) * K * K, 0.0);
  double ops = 0;

  // enumerate atom assignments
  std::vector<std::size_t> atom_idx(std::size_t(K), 0);
  for (;;) {
    double pmu = 1;
    std::vector<double> mu(static_cast<std::size_t>(K));
    for (int i = 0; i < K; ++i) {
      const Atom& a = inst.arm(i).support()[atom_idx[std::size_t(i)]];
      pmu *= a.prob;
      mu[std::size_t(i)] = a.value;
    }
    if (pmu > 0) {
      std::map<std::vector<i64>, double> cur;
      {
        std::vector<i64> data_key(std::size_t(K) * lay.per_arm(), 0);
        for (auto& [p0, s0] : model.initial_states()) {
          std::vector<i64> key;
          key.push_back(i64(s0));
          key.insert(key.end(), data_key.begin(), data_key.end());
          cur[std::move(key)] += p0;
        }
      }
      i64 t = 0;
      std::vector<BranchModel::Arc> arcs;
      while (t < H) {
        i64 block = -1;
        std::map<std::vector<i64>, double> next;
        for (const auto& [key, mass] : cur) {
          std::uint64_t mstate = std::uint64_t(key[0]);
          std::vector<i64> data_key(key.begin() + 1, key.end());
          EnumData view(lay, data_key);
          i64 bl = model.block_len(mstate);
          require(block < 0 || bl == block, ErrorKind::Internal,
                  "branch blocks are not aligned in time");
          block = bl;
          arcs.clear();
          model.expand(mstate, view, arcs);
          require(!arcs.empty(), ErrorKind::Internal, "model ended before its horizon");
          for (const BranchModel::Arc& arc : arcs) {
            double w = pmu * mass * arc.prob;
            if (w <= 0) continue;
            // margins for every covered round
            for (i64 r = t; r < std::min<i64>(H, t + bl); ++r) {
              for (int i = 0; i < K; ++i) {
                if (i == arc.arm) continue;
                res.margins[std::size_t(r) * K * K + std::size_t(arc.arm) * K +
                            std::size_t(i)] +=
                    w * (mu[std::size_t(arc.arm)] - mu[std::size_t(i)]);
              }
            }
            std::vector<std::pair<std::vector<i64>, double>> fills;
            reward_branches(lay, data_key, arc.arm, bl, mu[std::size_t(arc.arm)], fills);
            ops += double(fills.size());
            require(ops <= opt.max_weighted_outcomes, ErrorKind::TooLarge,
                    "enumeration too large");
            for (auto& [dk, pr] : fills) {
              std::vector<i64> key2;
              key2.push_back(i64(arc.next));
              key2.insert(key2.end(), dk.begin(), dk.end());
              next[std::move(key2)] += mass * arc.prob * pr;
            }
          }
        }
        cur.swap(next);
        t += block;
      }
      if (pull_target > 0) {
        for (const auto& [key, mass] : cur) {
          bool under = false;
          for (int i = 0; i < K && !under; ++i)
            under = key[1 + std::size_t(i) * lay.per_arm()] < pull_target;
          if (under) res.mass_under += pmu * mass;
        }
      }
    }
    int i = 0;
    for (; i < K; ++i) {
      if (++atom_idx[std::size_t(i)] < inst.arm(i).support().size()) break;
      atom_idx[std::size_t(i)] = 0;
    }
    if (i == K) break;
  }
  return res;
}

}  // namespace

std::unique_ptr<BranchModel> schedule_model(const ProblemInstance& inst,
                                            const PhaseSchedule& sched) {
  return std::make_unique<ScheduleBranchModel>(inst, sched);
}

std::vector<Invariant2Row> invariant2_check(const ProblemInstance& inst,
                                            const PhaseSchedule& sched,
                                            const EnumOptions& opt) {
  ScheduleBranchModel model(inst, sched);
  int K = inst.K();
  for (const ArmPrior& a : inst.arms())
    require(!a.is_beta(), ErrorKind::Validation,
            "exact enumeration needs FiniteSupport priors");
  TrackLayout lay;
  lay.depths = model.read_depths();
  lay.totals = false;
  lay.K = K;
  lay.pull_cap = 1;
  for (i64 d : lay.depths) lay.pull_cap = std::max(lay.pull_cap, d);

  // rows keyed by phase index
  std::map<int, Invariant2Row> rows;
  for (int pi = 0; pi < int(sched.phases.size()); ++pi) {
    if (sched.phases[std::size_t(pi)].kind == Phase::Kind::Grow)
      rows[pi] = {pi, sched.phases[std::size_t(pi)].recorded_p, 0.0};
  }

  double ops = 0;
  std::vector<std::size_t> atom_idx(std::size_t(K), 0);
  for (;;) {
    double pmu = 1;
    std::vector<double> mu(static_cast<std::size_t>(K));
    for (int i = 0; i < K; ++i) {
      const Atom& a = inst.arm(i).support()[atom_idx[std::size_t(i)]];
      pmu *= a.prob;
      mu[std::size_t(i)] = a.value;
    }
    if (pmu > 0) {
      std::map<std::vector<i64>, double> cur;
      {
        std::vector<i64> data_key(std::size_t(K) * lay.per_arm(), 0);
        for (auto& [p0, s0] : model.initial_states()) {
          std::vector<i64> key;
          key.push_back(i64(s0));
          key.insert(key.end(), data_key.begin(), data_key.end());
          cur[std::move(key)] += p0;
        }
      }
      std::vector<BranchModel::Arc> arcs;
      for (int pi = 0; pi < int(sched.phases.size()); ++pi) {
        // measure Pr[explored(arm) | mu] entering a Grow phase
        auto row = rows.find(pi);
        if (row != rows.end()) {
          double mass_explored = 0;
          for (const auto& [key, mass] : cur) {
            std::uint64_t mstate = std::uint64_t(key[0]);
            std::uint32_t mask = std::uint32_t((mstate >> 24) & 0xffff);
            std::size_t draw = std::size_t(mstate >> 40);
            int arm = sched.phases[std::size_t(pi)].arm;
            if (arm == kArmJ0) arm = model.draw_at(draw).j0;
            if ((mask >> arm) & 1u) mass_explored += mass;
          }
          row->second.max_abs_dev =
              std::max(row->second.max_abs_dev, std::fabs(mass_explored - row->second.recorded));
        }
        std::map<std::vector<i64>, double> next;
        for (const auto& [key, mass] : cur) {
          std::uint64_t mstate = std::uint64_t(key[0]);
          std::vector<i64> data_key(key.begin() + 1, key.end());
          EnumData view(lay, data_key);
          arcs.clear();
          model.expand(mstate, view, arcs);
          for (const BranchModel::Arc& arc : arcs) {
            if (mass * arc.prob <= 0) continue;
            std::vector<std::pair<std::vector<i64>, double>> fills;
            reward_branches(lay, data_key, arc.arm, sched.phases[std::size_t(pi)].length,
                            mu[std::size_t(arc.arm)], fills);
            ops += double(fills.size());
            require(ops <= opt.max_weighted_outcomes, ErrorKind::TooLarge,
                    "enumeration too large");
            for (auto& [dk, pr] : fills) {
              std::vector<i64> key2;
              key2.push_back(i64(arc.next));
              key2.insert(key2.end(), dk.begin(), dk.end());
              next[std::move(key2)] += mass * arc.prob * pr;
            }
          }
        }
        cur.swap(next);
      }
    }
    int i = 0;
    for (; i < K; ++i) {
      if (++atom_idx[std::size_t(i)] < inst.arm(i).support().size()) break;
      atom_idx[std::size_t(i)] = 0;
    }
    if (i == K) break;
  }
  std::vector<Invariant2Row> out;
  for (auto& [pi, row] : rows) out.push_back(row);
  return out;
}

std::unique_ptr<BranchModel> thompson_model(const ProblemInstance& inst, i64 horizon) {
  return std::make_unique<ThompsonBranchModel>(inst, horizon);
}

ProblemInstance degenerate_pair_instance(double eps) {
  require(eps > 0 && eps < 0.5, ErrorKind::Validation, "eps must lie in (0, 0.5)");
  std::vector<ArmPrior> arms;
  arms.push_back(ArmPrior::atoms({{0.5 - eps, 0.5}, {0.5 + eps, 0.5}}));
  arms.push_back(ArmPrior::atoms({{0.5 - eps * eps / 10.0, 1.0}}));
  return ProblemInstance::of(std::move(arms));
}

std::unique_ptr<BranchModel> degenerate_pair_model(double) {
  return std::make_unique<DegeneratePairModel>();
}

double BICReport::min_margin() const {
  double m = std::numeric_limits<double>::infinity();
  for (const BICEntry& e : entries) m = std::min(m, e.margin);
  return m;
}

double BICReport::margin_at(i64 t, int k, int j) const {
  for (const BICEntry& e : entries) {
    if (e.t == t && e.k == k && e.j == j) return e.margin;
  }
  fail(ErrorKind::Validation, "no such margin entry");
}

BICReport bic_margins_exact(const ProblemInstance& inst, const BranchModel& model,
                            const EnumOptions& opt) {
  EnumResult res = enumerate_model(inst, model, 0, opt);
  BICReport rep;
  rep.horizon = res.horizon;
  rep.K = res.K;
  rep.exact = true;
  for (i64 t = 0; t < res.horizon; ++t)
    for (int k = 0; k < res.K; ++k)
      for (int j = 0; j < res.K; ++j) {
        if (j == k) continue;
        rep.entries.push_back(
            {t, k, j, res.margins[std::size_t(t) * res.K * res.K + std::size_t(k) * res.K + std::size_t(j)], 0.0});
      }
  return rep;
}

PullCheck almost_sure_pulls(const ProblemInstance& inst, const BranchModel& model, i64 N,
                            const EnumOptions& opt) {
  EnumResult res = enumerate_model(inst, model, N, opt);
  PullCheck pc;
  pc.mass_below = res.mass_under;
  pc.ok = res.mass_under <= 0;
  return pc;
}

BICReport bic_margins_mc(const ProblemInstance& inst, const RunSpec& spec, i64 replicas,
                         std::uint64_t master_seed, int threads) {
  require(replicas >= 100, ErrorKind::Validation, "need at least 100 replicas");
  int K = inst.K();
  i64 H = (spec.mode == RunSpec::Mode::Schedule) ? spec.schedule->total_rounds : spec.horizon;
  require(H > 0, ErrorKind::Validation, "empty horizon");
  const i64 n_chunks = 256;
  std::size_t cells = std::size_t(H) * K * K;
  std::vector<std::vector<double>> sums(static_cast<std::size_t>(n_chunks));
  std::vector<std::vector<double>> sqs(static_cast<std::size_t>(n_chunks));
  parallel_chunks(
      n_chunks,
      [&](i64 c) {
        std::vector<double>& s = sums[std::size_t(c)];
        std::vector<double>& q = sqs[std::size_t(c)];
        s.assign(cells, 0.0);
        q.assign(cells, 0.0);
        i64 lo = replicas * c / n_chunks, hi = replicas * (c + 1) / n_chunks;
        for (i64 rep = lo; rep < hi; ++rep) {
          std::uint64_t seed = Rng::mix64(master_seed ^ Rng::mix64(std::uint64_t(rep) + 17));
          RunTrace tr = run_algorithm(inst, spec, seed);
          for (const TraceRow& row : tr.rows) {
            if (row.t >= H) break;
            for (int j = 0; j < K; ++j) {
              if (j == row.arm) continue;
              double x = tr.mu[std::size_t(row.arm)] - tr.mu[std::size_t(j)];
              std::size_t idx =
                  std::size_t(row.t) * K * K + std::size_t(row.arm) * K + std::size_t(j);
              s[idx] += x;
              q[idx] += x * x;
            }
          }
        }
      },
      threads);
  std::vector<double> sum(cells, 0.0), sq(cells, 0.0);
  for (i64 c = 0; c < n_chunks; ++c)
    for (std::size_t i = 0; i < cells; ++i) {
      sum[i] += sums[std::size_t(c)][i];
      sq[i] += sqs[std::size_t(c)][i];
    }
  BICReport rep;
  rep.horizon = H;
  rep.K = K;
  rep.exact = false;
  rep.samples = replicas;
  double n = double(replicas);
  for (i64 t = 0; t < H; ++t)
    for (int k = 0; k < K; ++k)
      for (int j = 0; j < K; ++j) {
        if (j == k) continue;
        std::size_t idx = std::size_t(t) * K * K + std::size_t(k) * K + std::size_t(j);
        double mean = sum[idx] / n;
        double var = std::max(0.0, sq[idx] / n - mean * mean);
        rep.entries.push_back({t, k, j, mean, std::sqrt(var / n)});
      }
  return rep;
}

ExplorabilityReport explorable_set(const ProblemInstance& inst) {
  int K = inst.K();
  ExplorabilityReport rep;
  rep.arms.resize(std::size_t(K));
  rep.n_seq.resize(std::size_t(K));
  double running = 0;
  std::vector<double> m(static_cast<std::size_t>(K));
  for (int i = 0; i < K; ++i) {
    m[std::size_t(i)] = inst.arm(i).moments().support_inf;
    running = std::max(running, m[std::size_t(i)]);
    rep.n_seq[std::size_t(i)] = running;
  }
  int first_fail = K;
  for (int j = 0; j + 1 < K; ++j) {
    if (inst.prior_mean(j + 1) <= rep.n_seq[std::size_t(j)] + 1e-12) {
      first_fail = j + 1;
      break;
    }
  }
  for (int i = 0; i < first_fail; ++i)
    rep.arms[std::size_t(i)] = {true, ExplorabilityReport::Reason::Explorable};
  rep.first_failing = (first_fail == K) ? -1 : first_fail;
  if (first_fail == K) return rep;

  double nj = rep.n_seq[std::size_t(first_fail - 1)];
  // the arms i <= j achieving the infimum n_j; the edge case hinges on them
  bool all_two_point = true;
  for (int i = 0; i < first_fail; ++i) {
    if (std::fabs(m[std::size_t(i)] - nj) > 1e-12) continue;
    const ArmPrior& p = inst.arm(i);
    bool two_point = false;
    if (!p.is_beta()) {
      two_point = true;
      for (const Atom& a : p.support())
        two_point = two_point && (std::fabs(a.value - m[std::size_t(i)]) <= 1e-12 ||
                                  std::fabs(a.value - 1.0) <= 1e-12);
    }
    all_two_point = all_two_point && two_point;
  }
  for (int k = first_fail; k < K; ++k) {
    if (inst.prior_mean(k) < nj - 1e-12) {
      rep.arms[std::size_t(k)] = {false, ExplorabilityReport::Reason::Dominated};
    } else if (all_two_point) {
      rep.arms[std::size_t(k)] = {true, ExplorabilityReport::Reason::SupportDegenerateEdge};
    } else {
      rep.arms[std::size_t(k)] = {false, ExplorabilityReport::Reason::NonDominantEdge};
    }
  }
  return rep;
}

std::vector<ChernoffRow> chernoff_tail_check(const ArmPrior& p, i64 N,
                                             std::span<const double> r_grid, i64 replicas,
                                             double C, std::uint64_t seed, int threads) {
  require(N >= 1, ErrorKind::Validation, "need N >= 1");
  double eps = 1.0 / std::sqrt(double(N));
  const i64 n_chunks = 256;
  std::size_t R = r_grid.size();
  std::vector<std::vector<i64>> hits_s(static_cast<std::size_t>(n_chunks)), hits_m(static_cast<std::size_t>(n_chunks));
  parallel_chunks(
      n_chunks,
      [&](i64 c) {
        hits_s[std::size_t(c)].assign(R, 0);
        hits_m[std::size_t(c)].assign(R, 0);
        Rng rng = Rng::stream(seed, 7, std::uint64_t(c));
        i64 lo = replicas * c / n_chunks, hi = replicas * (c + 1) / n_chunks;
        for (i64 rep = lo; rep < hi; ++rep) {
          double mu = p.sample_mu(rng);
          i64 s = 0;
          for (i64 k = 0; k < N; ++k) s += rng.bernoulli(mu);
          double post_sample = p.posterior_sample(rng, N, s);
          double post_mean = p.updated(N, s).moments().mean;
          for (std::size_t r = 0; r < R; ++r) {
            if (std::fabs(post_sample - mu) >= r_grid[r] * eps) hits_s[std::size_t(c)][r]++;
            if (std::fabs(post_mean - mu) >= r_grid[r] * eps) hits_m[std::size_t(c)][r]++;
          }
        }
      },
      threads);
  std::vector<ChernoffRow> rows(R);
  for (std::size_t r = 0; r < R; ++r) {
    i64 hs = 0, hm = 0;
    for (i64 c = 0; c < n_chunks; ++c) {
      hs += hits_s[std::size_t(c)][r];
      hm += hits_m[std::size_t(c)][r];
    }
    rows[r].r = r_grid[r];
    rows[r].tail_sample = double(hs) / double(replicas);
    rows[r].tail_mean = double(hm) / double(replicas);
    rows[r].bound = C * std::exp(-r_grid[r] * r_grid[r] / C);
  }
  return rows;
}

}  // namespace bic
