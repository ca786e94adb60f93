#include "ccbend/baseline.hpp"

#include <chrono>

#include "ccbend/rounding.hpp"
#include "ccbend/subproblems.hpp"

namespace ccbend {

namespace {

using SteadyClock = std::chrono::steady_clock;

double ms_since(SteadyClock::time_point t0) {
  return std::chrono::duration<double, std::milli>(SteadyClock::now() - t0).count();
}

}  // namespace

SparseTerms CycleConstraint::row() const {
  SparseTerms terms{{negative_edge, 1.0}};
  for (int e : path) terms.emplace_back(e, -1.0);
  return terms;
}

std::vector<CycleConstraint> separate_cycles(const Instance& inst, const EdgeLabeling& x) {
  std::vector<CycleConstraint> out;
  AttractiveShortestPaths paths(inst, x);
  for (int e : inst.negative_edges()) {
    CycleConstraint c;
    c.negative_edge = e;
    const double d = paths.distance(inst.edge(e).i, inst.edge(e).j, &c.path);
    if (d < x[e] - kViolationTol) out.push_back(std::move(c));
  }
  return out;
}

SolveResult solve_baseline(const Instance& inst, const SolverConfig& config) {
  config.validate();
  const auto start = SteadyClock::now();
  SolveResult res;
  if (inst.negative_edges().empty()) {
    res.x.assign(inst.edge_count(), 0.0);
    res.partition = components_of(inst, res.x);
    return res;
  }
  MilpOptions milp;
  milp.node_limit = config.milp_node_limit;
  milp.integrality_tol = config.integrality_tol;
  const bool pivot_clock = config.clock == ClockMode::kPivots;

  std::vector<SparseTerms> rows;
  double best_ub = kInfinity;
  EdgeLabeling best_x;
  MasterSolution master;
  bool done_lp = false;
  res.status = SolveStatus::kTimeLimit;

  for (int it = 0;; ++it) {
    if (it > 0 && ms_since(start) > 1000.0 * config.time_limit_s) break;

    const auto t_master = SteadyClock::now();
    master = solve_master(inst, rows, done_lp, milp);
    const double master_cost =
        pivot_clock ? static_cast<double>(master.pivots) : ms_since(t_master);
    if (config.keep_iterates) res.iterates.push_back(master.x);
    res.lower_bound = master.bound;

    const EdgeLabeling rounded = round_threshold(inst, master.x);
    const double ub = cc_cost(inst, rounded);
    if (ub < best_ub) {
      best_ub = ub;
      best_x = rounded;
    }

    const auto t_sep = SteadyClock::now();
    const auto cuts = separate_cycles(inst, master.x);
    const double sep_cost = pivot_clock ? 0.0 : ms_since(t_sep);
    for (const auto& c : cuts) rows.push_back(c.row());

    IterationRecord rec;
    rec.iteration = it;
    rec.phase = done_lp ? Phase::kIlp : Phase::kLp;
    rec.master_ms = master_cost;
    rec.sub_ms = {sep_cost};
    rec.max_sub_ms = sep_cost;
    rec.sum_sub_ms = sep_cost;
    rec.lb = master.bound;
    rec.ub = best_ub;
    rec.rows_std = static_cast<int>(rows.size());
    res.trace.records.push_back(std::move(rec));
    res.iterations = it + 1;

    if (master.node_limit) {
      res.status = SolveStatus::kNodeLimit;
      break;
    }
    if (cuts.empty()) {
      if (!done_lp) res.lp_phase_bound = master.bound;
      if (is_binary(master.x, config.integrality_tol)) {
        res.status = SolveStatus::kOptimal;
        break;
      }
      done_lp = true;
    }
  }

  if (res.status == SolveStatus::kOptimal) {
    EdgeLabeling x(inst.edge_count());
    for (int e = 0; e < inst.edge_count(); ++e) x[e] = master.x[e] > 0.5 ? 1.0 : 0.0;
    res.x = repair_to_multicut(inst, x);
    res.cost = cc_cost(inst, res.x);
    res.trace.records.back().ub = res.cost;
  } else {
    res.x = best_x;
    res.cost = best_ub;
  }
  res.partition = components_of(inst, res.x);
  return res;
}

}  // namespace ccbend
