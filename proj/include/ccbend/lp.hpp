#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

// Dense bounded-variable primal simplex and a best-first branch-and-bound for
// binary programs.
//
// The tableau is dense, so memory is O(rows * (vars + rows)). That is fine for
// the problems built here: a Benders subproblem has O(|E|) variables and rows,
// the master has |E| variables and one row per accumulated Benders row.
//
// Dual sign convention: duals[i] is the derivative of the optimal objective
// with respect to the right-hand side of constraint i, in the problem's own
// sense. Hence for a minimization, a binding >= row has a nonnegative dual and
// a binding <= row a nonpositive one; for a maximization it is the reverse
// (a binding <= row has a nonnegative dual).

namespace ccbend {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Sense { kMinimize, kMaximize };
enum class Relation { kLessEqual, kGreaterEqual, kEqual };

using SparseTerms = std::vector<std::pair<int, double>>;

struct LpRow {
  SparseTerms terms;
  Relation relation = Relation::kLessEqual;
  double rhs = 0.0;
};

class LpProblem {
 public:
  explicit LpProblem(Sense sense = Sense::kMinimize) : sense_(sense) {}

  int add_variable(double lower, double upper, double objective,
                   bool integer = false);
  int add_constraint(SparseTerms terms, Relation relation, double rhs);

  void set_objective(int var, double coefficient);
  void set_bounds(int var, double lower, double upper);

  Sense sense() const { return sense_; }
  int variable_count() const { return static_cast<int>(objective_.size()); }
  int constraint_count() const { return static_cast<int>(rows_.size()); }
  double lower(int var) const { return lower_[var]; }
  double upper(int var) const { return upper_[var]; }
  double objective(int var) const { return objective_[var]; }
  bool is_integer(int var) const { return integer_[var]; }
  const LpRow& row(int i) const { return rows_[i]; }
  const std::vector<double>& objective_coefficients() const { return objective_; }

  // Activity of row i at `values`.
  double row_activity(int i, const std::vector<double>& values) const;
  double objective_value(const std::vector<double>& values) const;
  // Largest bound or row violation at `values`.
  double max_primal_violation(const std::vector<double>& values) const;

 private:
  Sense sense_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<double> objective_;
  std::vector<bool> integer_;
  std::vector<LpRow> rows_;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

const char* to_string(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  double objective = 0.0;
  // Objective of the dual evaluated from `duals` and the original data. Equal
  // to `objective` up to round-off at an optimum.
  double dual_objective = 0.0;
  std::vector<double> values;
  std::vector<double> duals;
  std::vector<double> reduced_costs;
  std::int64_t pivots = 0;
};

class LpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SimplexOptions {
  // Consecutive degenerate pivots before switching from Dantzig to Bland.
  int degenerate_streak = 50;
  int refactor_interval = 100;
  std::int64_t max_pivots = 5'000'000;
  double pivot_tol = 1e-9;
  double optimality_tol = 1e-9;
  double feasibility_tol = 1e-9;
};

// Throws LpError on malformed input or numerical breakdown.
LpSolution solve_lp(const LpProblem& problem, const SimplexOptions& options = {});

enum class MilpStatus { kOptimal, kInfeasible, kUnbounded, kNodeLimit };

const char* to_string(MilpStatus status);

struct MilpResult {
  MilpStatus status = MilpStatus::kInfeasible;
  std::vector<double> values;
  double objective = 0.0;
  double root_bound = 0.0;
  // True when `values` holds a feasible incumbent (always for kOptimal).
  bool has_incumbent = false;
  std::int64_t nodes = 0;
  std::int64_t pivots = 0;
};

struct MilpOptions {
  std::int64_t node_limit = 200'000;
  double integrality_tol = 1e-6;
  SimplexOptions lp;
};

// Branch-and-bound over the integer-flagged variables, which must have bounds
// inside [0, 1]. Best-first by LP bound (ties by creation order), branching on
// the most fractional variable (ties by lowest index).
MilpResult solve_binary_milp(const LpProblem& problem,
                             const MilpOptions& options = {});

}  // namespace ccbend
