#pragma once

#include <memory>

#include "bicbandit/schedule.hpp"

namespace bic {

// Branch tree of an algorithm for exact enumeration: at each decision point
// the model expands into probability-weighted arcs, each recommending one arm
// for a fixed block of rounds. Everything the model reads from the data must
// be declared through read_depths()/reads_totals() up front.
class BranchModel {
 public:
  virtual ~BranchModel() = default;
  virtual int arms() const = 0;
  virtual i64 horizon() const = 0;
  virtual std::vector<i64> read_depths() const = 0;
  virtual bool reads_totals() const = 0;

  struct Arc {
    double prob = 1;
    int arm = 0;
    std::uint64_t next = 0;
  };
  virtual i64 block_len(std::uint64_t state) const = 0;
  virtual void expand(std::uint64_t state, const DataView& data, std::vector<Arc>& out) const = 0;
  virtual std::vector<std::pair<double, std::uint64_t>> initial_states() const {
    return {{1.0, 0}};
  }
};

std::unique_ptr<BranchModel> schedule_model(const ProblemInstance& inst,
                                            const PhaseSchedule& sched);
std::unique_ptr<BranchModel> thompson_model(const ProblemInstance& inst, i64 horizon);
// the fixed 3-round strategy for the +-eps coin pair instance
ProblemInstance degenerate_pair_instance(double eps);
std::unique_ptr<BranchModel> degenerate_pair_model(double eps);

struct BICEntry {
  i64 t = 0;
  int k = 0;
  int j = 0;
  double margin = 0;
  double se = 0;
};

struct BICReport {
  i64 horizon = 0;
  int K = 0;
  bool exact = true;
  i64 samples = 0;
  std::vector<BICEntry> entries;  // dense, ordered by (t, k, j), j != k
  double min_margin() const;
  double margin_at(i64 t, int k, int j) const;
};

struct EnumOptions {
  double max_weighted_outcomes = 1e7;
};

// Exact per-round, per-pair margins E[(mu_k - mu_j) 1{A_t = k}] by full joint
// enumeration. Requires FiniteSupport priors.
BICReport bic_margins_exact(const ProblemInstance& inst, const BranchModel& model,
                            const EnumOptions& opt = {});

// Monte-Carlo margins over seeded replicas; deterministic given the seed.
BICReport bic_margins_mc(const ProblemInstance& inst, const RunSpec& spec, i64 replicas,
                         std::uint64_t master_seed, int threads = 0);

// Exhaustively checks that every branch/reward path collects >= N pulls of
// every arm; returns the probability mass that fails.
struct PullCheck {
  bool ok = true;
  double mass_below = 0;
};
PullCheck almost_sure_pulls(const ProblemInstance& inst, const BranchModel& model, i64 N,
                            const EnumOptions& opt = {});

// Exact check of the growth-loop bookkeeping: at each Grow phase,
// Pr[exploration phase has happened | mu] must equal the recorded p for every
// atom assignment mu.
struct Invariant2Row {
  int phase = 0;
  double recorded = 0;
  double max_abs_dev = 0;  // worst deviation across atom assignments
};
std::vector<Invariant2Row> invariant2_check(const ProblemInstance& inst,
                                            const PhaseSchedule& sched,
                                            const EnumOptions& opt = {});

struct ExplorabilityReport {
  enum class Reason { Explorable, Dominated, NonDominantEdge, SupportDegenerateEdge };
  struct ArmVerdict {
    bool explorable = false;  // for SupportDegenerateEdge: explorable on event E only
    Reason reason = Reason::Explorable;
  };
  std::vector<ArmVerdict> arms;
  std::vector<double> n_seq;  // running max of support infima
  int first_failing = -1;     // first arm index not unconditionally explorable
};
ExplorabilityReport explorable_set(const ProblemInstance& inst);

struct ChernoffRow {
  double r = 0;
  double tail_sample = 0;  // Pr[|posterior sample - mu| >= r/sqrt(N)]
  double tail_mean = 0;    // Pr[|posterior mean   - mu| >= r/sqrt(N)]
  double bound = 0;        // C exp(-r^2/C)
};
std::vector<ChernoffRow> chernoff_tail_check(const ArmPrior& p, i64 N,
                                             std::span<const double> r_grid, i64 replicas,
                                             double C, std::uint64_t seed, int threads = 0);

}  // namespace bic
