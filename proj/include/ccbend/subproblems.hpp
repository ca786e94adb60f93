#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "ccbend/decomposition.hpp"
#include "ccbend/graph.hpp"
#include "ccbend/lp.hpp"

namespace ccbend {

// The repair-cost subproblem of root s is a min-cut in node-label form:
//
//   Q(w, s, x) = min  sum_{E+} w f  -  sum_{E-_s} w f    over f >= 0, m >= 0
//     |m_i - m_j| <= x_e + f_e     e = (i, j) in E+ not touching the root
//     m_v        <= x_e + f_e     e = (root, v) in E+
//     x_e - f_e  <= m_v           e = (root, v) in E-_s
//
// with m_root fixed to 0. It is solved in dual form: variables lam-/lam+ per
// edge of the first family, psi- per owned repulsive edge, psi+ per attractive
// root edge, all >= 0, maximizing
//
//   -sum (lam- + lam+) x  +  sum psi- x  -  sum psi+ x
//
// subject to one flow-balance row per non-root node (dual m_v) and one bound
// row per edge (dual f_e): lam- + lam+ <= w, psi- <= -w, psi+ <= w.
// Edge weights w default to phi; rounding passes its own weights.

enum class RowKind { kStandard, kMwr };
enum class MwrObjective { kRandom, kInverseWeight };

const char* to_string(RowKind kind);

struct SubproblemSolution {
  int subproblem = -1;
  double q_value = 0.0;
  // Primal certificate recovered from the dual LP's row duals, and its cost.
  double primal_value = 0.0;
  double primal_violation = 0.0;
  // Indexed by edge; zero outside the subproblem.
  std::vector<double> f;
  std::vector<double> lambda_minus;
  std::vector<double> lambda_plus;
  std::vector<double> psi_minus;
  std::vector<double> psi_plus;
  // Indexed by node; m[root] == 0.
  std::vector<double> m;
  std::int64_t pivots = 0;

  double duality_gap() const { return std::abs(q_value - primal_value); }
};

struct BendersRow {
  // Nonzero omega coefficients, ascending edge index. The row reads
  // sum omega_e x_e <= 0.
  SparseTerms coefficients;
  RowKind kind = RowKind::kStandard;
  int root = -1;  // node id of the generating root
  int iteration = -1;
  // Q at the generating point (the standard solve's value, also for MWRs).
  double q_value = 0.0;
};

double row_activity(const BendersRow& row, const EdgeLabeling& x);

// Throws std::out_of_range if s is not a subproblem index of `decomp`.
LpProblem build_subproblem_dual(const Instance& inst, const Decomposition& decomp, int s,
                                const EdgeLabeling& x);
LpProblem build_subproblem_dual(const Instance& inst, const Decomposition& decomp, int s,
                                const EdgeLabeling& x, const std::vector<double>& weights);

// Throws LpError if the LP does not solve to optimality.
SubproblemSolution solve_subproblem(const Instance& inst, const Decomposition& decomp, int s,
                                    const EdgeLabeling& x);
SubproblemSolution solve_subproblem(const Instance& inst, const Decomposition& decomp, int s,
                                    const EdgeLabeling& x,
                                    const std::vector<double>& weights);

BendersRow standard_row(const SubproblemSolution& sol, const Instance& inst,
                        const Decomposition& decomp);

// Independent stream for one MWR draw.
std::mt19937_64 mwr_stream(std::uint64_t seed, int iteration, int root);

// Re-optimizes the subproblem dual under a strictly negative objective while
// keeping the original dual objective at x at least tau * q_value.
struct MwrResult {
  BendersRow row;
  double original_value = 0.0;  // original dual objective of the chosen point
  std::int64_t pivots = 0;
};

MwrResult mwr_row(const Instance& inst, const Decomposition& decomp, int s,
                  const EdgeLabeling& x, double q_value, double tau,
                  MwrObjective objective, std::mt19937_64& rng);

struct ViolatedCycle {
  int edge = -1;          // owned repulsive edge closing the cycle
  double distance = 0.0;  // shortest attractive path between its endpoints
};

// Lowest-index edge of E-_s whose endpoints are joined by an attractive path
// shorter than x_e - kViolationTol, with x as edge lengths.
std::optional<ViolatedCycle> has_violated_cycle(const Instance& inst,
                                                const Decomposition& decomp, int s,
                                                const EdgeLabeling& x);

// Shortest path over attractive edges only, lengths max(x, 0). Also used by
// the baseline separator.
class AttractiveShortestPaths {
 public:
  AttractiveShortestPaths(const Instance& inst, const EdgeLabeling& x);
  // Distance from `from` to `to` (kInfinity if disconnected) and the edge
  // path when `path` is non-null.
  double distance(int from, int to, std::vector<int>* path = nullptr);

 private:
  const Instance& inst_;
  const EdgeLabeling& x_;
  std::vector<double> dist_;
  std::vector<int> via_;
  int source_ = -1;
};

}  // namespace ccbend
