#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <vector>

#include "ccbend/decomposition.hpp"
#include "ccbend/graph.hpp"
#include "ccbend/lp.hpp"
#include "ccbend/subproblems.hpp"

namespace ccbend {

enum class Phase { kLp, kIlp };
enum class SolveStatus { kOptimal, kTimeLimit, kNodeLimit };
enum class UpperBoundMethod { kThreshold, kParallel, kSerial };

// kWall records milliseconds; kPivots records simplex pivot counts in the
// same columns, which makes traces reproducible byte for byte.
enum class ClockMode { kWall, kPivots };

const char* to_string(Phase phase);
const char* to_string(SolveStatus status);

struct SolverConfig {
  double tau = 0.5;  // 0 disables MWRs
  double time_limit_s = 600.0;
  std::uint64_t seed = 0;
  int threads = 1;
  CoverMode cover_mode = CoverMode::kExact;
  MwrObjective mwr_objective = MwrObjective::kRandom;
  UpperBoundMethod upper_bound = UpperBoundMethod::kThreshold;
  ClockMode clock = ClockMode::kWall;
  double integrality_tol = kIntegralityTol;
  double feasibility_tol = kFeasibilityTol;
  double violation_tol = kViolationTol;
  std::int64_t milp_node_limit = 200'000;
  // Keep every master solution in SolveResult::iterates.
  bool keep_iterates = false;

  // Throws std::invalid_argument.
  void validate() const;
};

struct IterationRecord {
  int iteration = 0;
  Phase phase = Phase::kLp;
  double master_ms = 0.0;
  std::vector<double> sub_ms;  // per root, ascending root id
  double max_sub_ms = 0.0;
  double sum_sub_ms = 0.0;
  double lb = 0.0;
  double ub = 0.0;
  int rows_std = 0;  // cumulative
  int rows_mwr = 0;  // cumulative
};

struct BoundsTrace {
  std::vector<IterationRecord> records;

  // Sum of master + max subproblem time: one CPU per subproblem.
  double parallel_total_ms() const;
  // Sum of master + all subproblem time: one CPU overall.
  double serial_total_ms() const;
};

// CSV with header iter,phase,master_ms,max_sub_ms,sum_sub_ms,lb,ub,rows_std,rows_mwr.
void write_trace_csv(std::ostream& out, const BoundsTrace& trace);

struct SubproblemStats {
  std::int64_t solves = 0;
  double max_duality_gap = 0.0;
  double max_primal_violation = 0.0;
  // Solves whose gap exceeded 1e-6 or whose primal certificate was off by
  // more than the feasibility tolerance.
  std::int64_t failures = 0;
};

struct SolveResult {
  EdgeLabeling x;
  Partition partition;
  double cost = 0.0;
  double lower_bound = 0.0;
  SolveStatus status = SolveStatus::kOptimal;
  BoundsTrace trace;
  int iterations = 0;
  std::vector<BendersRow> rows;
  std::vector<EdgeLabeling> iterates;  // only with keep_iterates
  SubproblemStats stats;
  std::vector<int> roots;
  // Master bound when the LP phase reached its fixpoint (NaN if it never did).
  double lp_phase_bound = std::numeric_limits<double>::quiet_NaN();
};

struct MasterSolution {
  EdgeLabeling x;
  double bound = 0.0;  // master objective including the constant term
  std::int64_t pivots = 0;
  bool node_limit = false;
};

// min phi.x + negative mass over [0,1]^E (or {0,1}^E) subject to
// sum omega x <= 0 for every row.
MasterSolution solve_master(const Instance& inst, const std::vector<BendersRow>& rows,
                            bool integral, const MilpOptions& options = {});
MasterSolution solve_master(const Instance& inst, const std::vector<SparseTerms>& rows,
                            bool integral, const MilpOptions& options = {});

// Binary x with no violated one-repulsive-edge cycle can still cut an
// attractive edge inside a component. Re-cuts x along the components of its
// uncut attractive edges, which never costs more.
EdgeLabeling repair_to_multicut(const Instance& inst, const EdgeLabeling& x);

SolveResult bdcc(const Instance& inst, const SolverConfig& config);

// Objective with per-subproblem auxiliary labelings: the plain cost of x plus,
// for every root s, sum_{E-_s} -phi (1 - xs) + sum_{E+} phi xs.
double augmented_objective(const Instance& inst, const Decomposition& decomp,
                           const EdgeLabeling& x, const std::vector<EdgeLabeling>& xs);

// True when, for every root s, every attractive path between the ends of an
// owned repulsive edge e has sum (x + xs) >= x_e + xs_e - 1.
bool augmented_feasible(const Instance& inst, const Decomposition& decomp,
                        const EdgeLabeling& x, const std::vector<EdgeLabeling>& xs,
                        double tol = 1e-9);

struct TransformedSolution {
  EdgeLabeling x;
  std::vector<EdgeLabeling> xs;
};

// Moves every subproblem's repair into x: attractive edges take x + max_s xs
// (capped at 1), owned repulsive edges take x + xs - 1 (floored at 0), and
// each xs becomes the trivial labeling. Throws std::invalid_argument when the
// input is not augmented_feasible.
TransformedSolution absorb_repairs(const Instance& inst, const Decomposition& decomp,
                                   const EdgeLabeling& x,
                                   const std::vector<EdgeLabeling>& xs);

}  // namespace ccbend
