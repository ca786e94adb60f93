#include "ccbend/master.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "ccbend/rounding.hpp"

namespace ccbend {

namespace {

using SteadyClock = std::chrono::steady_clock;

double ms_since(SteadyClock::time_point t0) {
  return std::chrono::duration<double, std::milli>(SteadyClock::now() - t0).count();
}

// Runs fn(0..count-1) on up to `threads` workers; the first exception is
// rethrown after all workers join.
template <typename Fn>
void parallel_for(int count, int threads, Fn&& fn) {
  const int workers = std::min(threads, count);
  if (workers <= 1) {
    for (int k = 0; k < count; ++k) fn(k);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  auto run = [&] {
    for (int k = next++; k < count && !failed; k = next++) {
      try {
        fn(k);
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

struct RootOutcome {
  double cost = 0.0;  // ms or pivots, depending on the clock
  std::optional<SubproblemSolution> solution;
  std::optional<BendersRow> standard;
  std::optional<BendersRow> mwr;
};

EdgeLabeling upper_bound_labeling(const Instance& inst, const Decomposition& decomp,
                                  const EdgeLabeling& x, UpperBoundMethod method) {
  switch (method) {
    case UpperBoundMethod::kParallel:
      return round_parallel(inst, decomp, x);
    case UpperBoundMethod::kSerial:
      return round_serial(inst, decomp, x);
    case UpperBoundMethod::kThreshold:
      break;
  }
  return round_threshold(inst, x);
}

void check_unit_box(const EdgeLabeling& x, const char* what) {
  for (double v : x) {
    if (!(v >= -kFeasibilityTol && v <= 1.0 + kFeasibilityTol)) {
      throw std::invalid_argument(std::string(what) + " leaves [0, 1]");
    }
  }
}

void check_augmented_shape(const Instance& inst, const Decomposition& decomp,
                           const EdgeLabeling& x, const std::vector<EdgeLabeling>& xs) {
  if (static_cast<int>(x.size()) != inst.edge_count() ||
      static_cast<int>(xs.size()) != decomp.root_count()) {
    throw std::invalid_argument("augmented solution has the wrong shape");
  }
  for (const auto& v : xs) {
    if (static_cast<int>(v.size()) != inst.edge_count()) {
      throw std::invalid_argument("augmented solution has the wrong shape");
    }
    check_unit_box(v, "subproblem labeling");
  }
  check_unit_box(x, "labeling");
}

}  // namespace

const char* to_string(Phase phase) { return phase == Phase::kLp ? "LP" : "ILP"; }

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kTimeLimit:
      return "time-limit";
    case SolveStatus::kNodeLimit:
      return "node-limit";
  }
  return "unknown";
}

void SolverConfig::validate() const {
  if (!(tau >= 0.0 && tau < 1.0)) throw std::invalid_argument("tau must lie in [0, 1)");
  if (!(time_limit_s > 0.0)) throw std::invalid_argument("time limit must be positive");
  if (threads < 1) throw std::invalid_argument("threads must be positive");
  if (!(integrality_tol > 0.0 && feasibility_tol > 0.0 && violation_tol > 0.0)) {
    throw std::invalid_argument("tolerances must be positive");
  }
  if (milp_node_limit < 1) throw std::invalid_argument("node limit must be positive");
}

double BoundsTrace::parallel_total_ms() const {
  double total = 0.0;
  for (const auto& r : records) total += r.master_ms + r.max_sub_ms;
  return total;
}

double BoundsTrace::serial_total_ms() const {
  double total = 0.0;
  for (const auto& r : records) total += r.master_ms + r.sum_sub_ms;
  return total;
}

void write_trace_csv(std::ostream& out, const BoundsTrace& trace) {
  out << "iter,phase,master_ms,max_sub_ms,sum_sub_ms,lb,ub,rows_std,rows_mwr\n";
  char buf[256];
  for (const auto& r : trace.records) {
    std::snprintf(buf, sizeof buf, "%d,%s,%.6g,%.6g,%.6g,%.6g,%.6g,%d,%d\n", r.iteration,
                  to_string(r.phase), r.master_ms, r.max_sub_ms, r.sum_sub_ms, r.lb, r.ub,
                  r.rows_std, r.rows_mwr);
    out << buf;
  }
}

EdgeLabeling repair_to_multicut(const Instance& inst, const EdgeLabeling& x) {
  std::vector<bool> connects(inst.edge_count(), false);
  for (int e : inst.positive_edges()) connects[e] = x[e] < 0.5;
  return induced_cut(inst, components_over(inst, connects));
}

MasterSolution solve_master(const Instance& inst, const std::vector<BendersRow>& rows,
                            bool integral, const MilpOptions& options) {
  std::vector<SparseTerms> terms;
  terms.reserve(rows.size());
  for (const auto& row : rows) terms.push_back(row.coefficients);
  return solve_master(inst, terms, integral, options);
}

MasterSolution solve_master(const Instance& inst, const std::vector<SparseTerms>& rows,
                            bool integral, const MilpOptions& options) {
  LpProblem p;
  for (int e = 0; e < inst.edge_count(); ++e) p.add_variable(0.0, 1.0, inst.weight(e), integral);
  for (const auto& row : rows) p.add_constraint(row, Relation::kLessEqual, 0.0);

  MasterSolution out;
  if (!integral) {
    const LpSolution s = solve_lp(p, options.lp);
    if (s.status != LpStatus::kOptimal) {
      throw LpError(std::string("master LP ended ") + to_string(s.status));
    }
    out.x = s.values;
    out.bound = s.objective + inst.negative_mass();
    out.pivots = s.pivots;
  } else {
    const MilpResult r = solve_binary_milp(p, options);
    out.pivots = r.pivots;
    if (r.status == MilpStatus::kNodeLimit) {
      out.node_limit = true;
      out.x = r.has_incumbent ? r.values : EdgeLabeling(inst.edge_count(), 0.0);
      out.bound = r.root_bound + inst.negative_mass();
      return out;
    }
    if (r.status != MilpStatus::kOptimal) {
      throw LpError(std::string("master ILP ended ") + to_string(r.status));
    }
    out.x = r.values;
    out.bound = r.objective + inst.negative_mass();
  }
  for (double& v : out.x) v = std::clamp(v, 0.0, 1.0);
  return out;
}

SolveResult bdcc(const Instance& inst, const SolverConfig& config) {
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
  const Decomposition decomp =
      build_decomposition(inst, min_vertex_cover(inst, config.cover_mode, milp));
  res.roots = decomp.roots();
  const int roots = decomp.root_count();
  const bool pivot_clock = config.clock == ClockMode::kPivots;

  double best_ub = kInfinity;
  EdgeLabeling best_x;
  MasterSolution master;
  bool done_lp = false;
  int rows_std = 0, rows_mwr = 0;
  res.status = SolveStatus::kTimeLimit;

  for (int it = 0;; ++it) {
    if (it > 0 && ms_since(start) > 1000.0 * config.time_limit_s) break;

    const auto t_master = SteadyClock::now();
    master = solve_master(inst, res.rows, done_lp, milp);
    const double master_cost = pivot_clock ? static_cast<double>(master.pivots)
                                           : ms_since(t_master);
    if (config.keep_iterates) res.iterates.push_back(master.x);
    res.lower_bound = master.bound;

    const EdgeLabeling rounded = upper_bound_labeling(inst, decomp, master.x, config.upper_bound);
    const double ub = cc_cost(inst, rounded);
    if (ub < best_ub) {
      best_ub = ub;
      best_x = rounded;
    }

    std::vector<RootOutcome> outcomes(roots);
    parallel_for(roots, config.threads, [&](int s) {
      const auto t0 = SteadyClock::now();
      RootOutcome& o = outcomes[s];
      std::int64_t pivots = 0;
      if (has_violated_cycle(inst, decomp, s, master.x)) {
        o.solution = solve_subproblem(inst, decomp, s, master.x);
        pivots += o.solution->pivots;
        o.standard = standard_row(*o.solution, inst, decomp);
        if (config.tau > 0.0 && o.solution->q_value > config.violation_tol) {
          auto rng = mwr_stream(config.seed, it, decomp.root_node(s));
          MwrResult m = mwr_row(inst, decomp, s, master.x, o.solution->q_value, config.tau,
                                config.mwr_objective, rng);
          pivots += m.pivots;
          o.mwr = std::move(m.row);
        }
      }
      o.cost = pivot_clock ? static_cast<double>(pivots) : ms_since(t0);
    });

    IterationRecord rec;
    rec.iteration = it;
    rec.phase = done_lp ? Phase::kIlp : Phase::kLp;
    rec.master_ms = master_cost;
    bool did_add = false;
    for (auto& o : outcomes) {
      rec.sub_ms.push_back(o.cost);
      rec.max_sub_ms = std::max(rec.max_sub_ms, o.cost);
      rec.sum_sub_ms += o.cost;
      if (!o.solution) continue;
      did_add = true;
      SubproblemStats& st = res.stats;
      ++st.solves;
      st.max_duality_gap = std::max(st.max_duality_gap, o.solution->duality_gap());
      st.max_primal_violation = std::max(st.max_primal_violation, o.solution->primal_violation);
      if (o.solution->duality_gap() > 1e-6 ||
          o.solution->primal_violation > config.feasibility_tol) {
        ++st.failures;
      }
      o.standard->iteration = it;
      res.rows.push_back(std::move(*o.standard));
      ++rows_std;
      if (o.mwr) {
        o.mwr->iteration = it;
        res.rows.push_back(std::move(*o.mwr));
        ++rows_mwr;
      }
    }
    rec.lb = master.bound;
    rec.ub = best_ub;
    rec.rows_std = rows_std;
    rec.rows_mwr = rows_mwr;
    res.trace.records.push_back(std::move(rec));
    res.iterations = it + 1;

    if (master.node_limit) {
      res.status = SolveStatus::kNodeLimit;
      break;
    }
    if (!did_add) {
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

double augmented_objective(const Instance& inst, const Decomposition& decomp,
                           const EdgeLabeling& x, const std::vector<EdgeLabeling>& xs) {
  check_augmented_shape(inst, decomp, x, xs);
  double total = cc_cost(inst, x);
  for (int s = 0; s < decomp.root_count(); ++s) {
    for (int e : inst.positive_edges()) total += inst.weight(e) * xs[s][e];
    for (int e : decomp.owned_negative(s)) total -= inst.weight(e) * (1.0 - xs[s][e]);
  }
  return total;
}

bool augmented_feasible(const Instance& inst, const Decomposition& decomp,
                        const EdgeLabeling& x, const std::vector<EdgeLabeling>& xs,
                        double tol) {
  check_augmented_shape(inst, decomp, x, xs);
  for (int s = 0; s < decomp.root_count(); ++s) {
    EdgeLabeling length(inst.edge_count());
    for (int e = 0; e < inst.edge_count(); ++e) length[e] = x[e] + xs[s][e];
    AttractiveShortestPaths paths(inst, length);
    const int root = decomp.root_node(s);
    for (int e : decomp.owned_negative(s)) {
      const Edge& ed = inst.edge(e);
      const double d = paths.distance(root, ed.i == root ? ed.j : ed.i);
      if (d < x[e] + xs[s][e] - 1.0 - tol) return false;
    }
  }
  return true;
}

TransformedSolution absorb_repairs(const Instance& inst, const Decomposition& decomp,
                                   const EdgeLabeling& x,
                                   const std::vector<EdgeLabeling>& xs) {
  if (!augmented_feasible(inst, decomp, x, xs)) {
    throw std::invalid_argument("augmented solution violates a subproblem cycle constraint");
  }
  TransformedSolution out;
  out.x = x;
  out.xs.assign(decomp.root_count(), EdgeLabeling(inst.edge_count(), 0.0));
  for (int e : inst.positive_edges()) {
    double repair = 0.0;
    for (const auto& v : xs) repair = std::max(repair, v[e]);
    out.x[e] = std::min(1.0, x[e] + repair);
  }
  for (int s = 0; s < decomp.root_count(); ++s) {
    for (int e : decomp.owned_negative(s)) {
      out.x[e] = std::max(0.0, x[e] + xs[s][e] - 1.0);
      out.xs[s][e] = 1.0;
    }
  }
  return out;
}

}  // namespace ccbend
