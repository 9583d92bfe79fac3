#pragma once

#include <string>

#include "bicbandit/game.hpp"
#include "bicbandit/params.hpp"

namespace bic {

// Alg3's randomly drawn arm, resolved from the master stream at run time.
constexpr int kArmJ0 = -2;
// Post-processing slot arm theta(group) (Alg3) or the group arm itself (Alg2).
constexpr int kArmSlot = -3;

struct Phase {
  enum class Kind {
    Explore,           // recommend `arm` all phase
    Exploit,           // recommend the depth-truncated posterior argmax
    Alg1Boot,          // coin -> explore j; elif ZEROS -> transformed padded; else exploit
    Alg3ZerosExplore,  // ZEROS -> explore j0; else exploit
    Alg3Boot,          // coin -> explore j0; elif explored -> padded; else exploit
    Grow,              // explored -> padded; else coin -> explore; else exploit
    FinalSlot,         // slot == drawn slot -> explore slot arm; else padded
  };
  Kind kind = Kind::Explore;
  i64 length = 0;
  int arm = -1;    // loop arm (kArmJ0 under Alg3)
  i64 depth = 0;   // exploit depth on this phase's exploit paths
  i64 zeros_n0 = 0;
  double coin = 0;        // branch probability where applicable
  double recorded_p = 0;  // Invariant-2 bookkeeping at the phase start
  int group = -1;
  int slot = -1;
  std::string label;
};

struct PhaseSchedule {
  Algorithm alg = Algorithm::Alg1;
  int K = 1;
  i64 N = 0;
  i64 N0 = 0;
  double lambda = 0;
  i64 n_pad = 0;
  int n_lambda = 0;
  std::vector<Phase> phases;
  i64 total_rounds = 0;
  std::vector<PaddedPolicy> policies;     // per arm; entry 0 is the trivial policy
  std::vector<PaddedPolicy> transformed;  // ZEROS-transformed variants (Alg1/Alg2)
};

struct ScheduleOptions {
  GameOptions game;
  bool verify_padding = true;  // audit achieved padding when the space is small
  i64 max_phases = 2000000;
};

PhaseSchedule build_schedule(const ProblemInstance& inst, const PriorParams& params, i64 N,
                             Algorithm alg, const ScheduleOptions& opt = {});

// Deterministic warm start: explore each arm for N rounds (the fixed T0
// schedule in front of Thompson sampling).
PhaseSchedule warmstart_schedule(const ProblemInstance& inst, i64 N);

struct Alg3Draws {
  int j0 = 0;
  std::vector<int> theta;
  std::vector<int> slots;
};

struct PhaseBranch {
  double prob = 1;
  int arm = 0;
  bool sets_explored = false;
};

// The single semantics source for resolving one phase into its weighted
// recommendation branches, given the data and the per-arm explored flags.
std::vector<PhaseBranch> resolve_phase(const ProblemInstance& inst, const PhaseSchedule& sched,
                                       int phase_idx, const DataView& data,
                                       std::uint32_t explored_mask, const Alg3Draws* draws);

struct TraceRow {
  i64 t = 0;
  int phase = -1;  // -1 marks Thompson rounds after the schedule
  int arm = 0;
  int reward = 0;
};

struct RunTrace {
  std::vector<TraceRow> rows;
  std::vector<double> mu;
  std::vector<i64> pulls;
  std::vector<i64> successes;
  std::uint64_t master_seed = 0;
  int astar = 0;
  double regret = 0;
  i64 schedule_rounds = 0;
  int j0 = -1;
  std::vector<int> theta;
  std::vector<int> slots;
};

struct RunSpec {
  enum class Mode { Schedule, WarmStartThompson, ThompsonOnly };
  Mode mode = Mode::Schedule;
  const PhaseSchedule* schedule = nullptr;
  i64 horizon = 0;  // required for the Thompson modes
};

RunTrace run_algorithm(const ProblemInstance& inst, const RunSpec& spec,
                       std::uint64_t master_seed);

}  // namespace bic
