#pragma once

#include <vector>

#include "ccbend/graph.hpp"
#include "ccbend/master.hpp"

namespace ccbend {

// x_{negative_edge} <= sum of x over `path`, where `path` joins the ends of
// the repulsive edge through attractive edges only.
struct CycleConstraint {
  int negative_edge = -1;
  std::vector<int> path;

  SparseTerms row() const;  // as sum omega x <= 0
};

// At most one constraint per repulsive edge (ascending edge index): the
// shortest attractive path under lengths x, when it is shorter than
// x_e - kViolationTol.
std::vector<CycleConstraint> separate_cycles(const Instance& inst, const EdgeLabeling& x);

// Cutting planes over cycle inequalities: LP rounds until separation comes
// back empty, then ILP rounds until the ILP optimum separates clean. Uses the
// time limit, tolerances, node limit and clock of `config`; the trace puts
// separation time in the subproblem columns and counts constraints as
// standard rows.
SolveResult solve_baseline(const Instance& inst, const SolverConfig& config);

}  // namespace ccbend
