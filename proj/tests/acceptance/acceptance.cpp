// Acceptance run: one PASS/FAIL line per criterion.
//
// Exit status is 0 once every criterion has been evaluated, so a red
// criterion shows up in the output without failing the build; pass --strict
// to turn any FAIL into exit status 1.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ccbend/baseline.hpp"
#include "ccbend/bench.hpp"
#include "ccbend/master.hpp"
#include "ccbend/rounding.hpp"
#include "oracles.hpp"

using namespace ccbend;

namespace {

int failures = 0;
std::string lines[11];  // printed in criterion order at the end

void verdict(int id, bool ok, const std::string& what) {
  char head[32];
  std::snprintf(head, sizeof head, "criterion %2d %s  ", id, ok ? "PASS" : "FAIL");
  lines[id] = head + what;
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a = 0, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

// Erdos-Renyi sweep instances: n uniform in [4, 8], p = 0.6, |w| in [0.01, 1].
std::vector<Instance> sweep_instances(int count) {
  std::vector<Instance> out;
  std::mt19937_64 rng(20240601);
  for (int k = 0; k < count; ++k) {
    GeneratorOptions g;
    g.nodes = 4 + static_cast<int>(rng() % 5);
    g.edge_probability = 0.6;
    g.seed = rng();
    out.push_back(generate_instance(g));
  }
  return out;
}

std::vector<Instance> grid_instances(int count) {
  std::vector<Instance> out;
  for (int k = 0; k < count; ++k) {
    GeneratorOptions g;
    g.grid_width = 8;
    g.grid_height = 8;
    g.seed = 7000 + k;
    out.push_back(generate_instance(g));
  }
  return out;
}

struct TraceCheck {
  int traces = 0;
  int lb_drops = 0;
  int ub_below_lb = 0;
  int parallel_over_serial = 0;

  void add(const BoundsTrace& t) {
    ++traces;
    const auto& r = t.records;
    for (size_t k = 0; k < r.size(); ++k) {
      if (r[k].ub < r[k].lb - 1e-6) ++ub_below_lb;
      if (k > 0 && r[k].phase == r[k - 1].phase && r[k].lb < r[k - 1].lb - 1e-6) ++lb_drops;
    }
    if (t.parallel_total_ms() > t.serial_total_ms() + 1e-9) ++parallel_over_serial;
  }
  bool ok() const { return lb_drops == 0 && ub_below_lb == 0 && parallel_over_serial == 0; }
};

double master_total(const BoundsTrace& t) {
  double s = 0.0;
  for (const auto& r : t.records) s += r.master_ms;
  return s;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string trace_text(const BoundsTrace& t) {
  std::ostringstream out;
  write_trace_csv(out, t);
  return out.str();
}

}  // namespace

int main(int argc, char** argv) {
  const bool strict = argc > 1 && std::strcmp(argv[1], "--strict") == 0;

  const std::vector<Instance> sweep = sweep_instances(200);
  SolverConfig config;  // tau 0.5, one thread
  TraceCheck traces;

  // 1-3: exactness, cross-solver agreement, strong duality.
  std::vector<SolveResult> sweep_results;
  int exact = 0, agree = 0;
  std::int64_t solves = 0, duality_failures = 0;
  double worst_gap = 0.0;
  {
    const auto t0 = std::chrono::steady_clock::now();
    for (const Instance& inst : sweep) sweep_results.push_back(bdcc(inst, config));
    const double bdcc_s = seconds_since(t0);
    for (size_t k = 0; k < sweep.size(); ++k) {
      const SolveResult& r = sweep_results[k];
      const double best = brute_force_optimal(sweep[k]).cost;
      const double check = oracle::optimum(sweep[k]);
      if (r.status == SolveStatus::kOptimal && std::abs(r.cost - best) <= 1e-6 &&
          std::abs(best - check) <= 1e-9 && is_multicut_feasible(sweep[k], r.x)) {
        ++exact;
      }
      const SolveResult b = solve_baseline(sweep[k], config);
      if (std::abs(b.cost - r.cost) <= 1e-6) ++agree;
      traces.add(r.trace);
      traces.add(b.trace);
      solves += r.stats.solves;
      duality_failures += r.stats.failures;
      worst_gap = std::max(worst_gap, r.stats.max_duality_gap);
    }
    verdict(1, exact == 200 && bdcc_s < 120.0,
            fmt("exactness: %g/200 optimal, bdcc total %.2f s (limit 120 s)", exact, bdcc_s));
    verdict(2, agree == 200, fmt("baseline agrees with bdcc on %g/200", agree));
    verdict(3, duality_failures == 0 && worst_gap <= 1e-6,
            fmt("strong duality: %g subproblem solves, %g failures, max |primal - dual| %.2e",
                static_cast<double>(solves), static_cast<double>(duality_failures),
                worst_gap));
  }

  // 4: row validity by enumeration, tightness at the generating iterate.
  {
    SolverConfig keep = config;
    keep.keep_iterates = true;
    int instances = 0;
    long rows = 0, invalid = 0, loose = 0;
    for (const Instance& inst : sweep) {
      if (inst.node_count() > 6) continue;
      ++instances;
      const SolveResult r = bdcc(inst, keep);
      const auto feasible = oracle::feasible_labelings(inst);
      for (const BendersRow& row : r.rows) {
        ++rows;
        double worst = -1e300;
        for (const auto& x : feasible) worst = std::max(worst, row_activity(row, x));
        if (worst > 1e-6) ++invalid;
        if (row.kind == RowKind::kStandard &&
            std::abs(row_activity(row, r.iterates[row.iteration]) - row.q_value) > 1e-6) {
          ++loose;
        }
      }
    }
    verdict(4, invalid == 0 && loose == 0 && rows > 0,
            fmt("row validity: %g rows on %g instances (n <= 6), %g invalid, %g not tight",
                static_cast<double>(rows), instances, static_cast<double>(invalid),
                static_cast<double>(loose)));
  }

  // 5: every MWR keeps the original dual objective at >= tau Q.
  {
    long mwrs = 0, short_of = 0;
    double worst = 1e300;
    for (double tau : {0.01, 0.5, 0.99}) {
      SolverConfig c = config;
      c.tau = tau;
      c.keep_iterates = true;
      for (size_t k = 0; k < 60; ++k) {
        const Instance& inst = sweep[k];
        const SolveResult r = bdcc(inst, c);
        const Decomposition d =
            build_decomposition(inst, min_vertex_cover(inst, c.cover_mode));
        for (const BendersRow& row : r.rows) {
          if (row.kind != RowKind::kMwr) continue;
          ++mwrs;
          const EdgeLabeling& x = r.iterates[row.iteration];
          const double q = solve_subproblem(inst, d, d.subproblem_of(row.root), x).q_value;
          const double slack = row_activity(row, x) - tau * q;
          worst = std::min(worst, slack);
          if (slack < -1e-6) ++short_of;
        }
      }
    }
    verdict(5, short_of == 0 && mwrs > 0,
            fmt("MWR constraint: %g rows over tau in {0.01, 0.5, 0.99}, %g below tau*Q, "
                "min slack %.2e",
                static_cast<double>(mwrs), static_cast<double>(short_of), worst));
  }

  // 6: absorbing subproblem repairs into x.
  {
    std::mt19937 rng(606);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int samples = 0, raised = 0, residual = 0;
    for (size_t k = 0; samples < 100; ++k) {
      const Instance& inst = sweep[k % sweep.size()];
      if (inst.negative_edges().empty()) continue;
      const Decomposition d = build_decomposition(inst, min_vertex_cover(inst, CoverMode::kExact));
      EdgeLabeling x(inst.edge_count());
      for (double& v : x) v = u(rng) < 0.5 ? std::round(u(rng)) : u(rng);
      // Start from each subproblem's optimal repair, then loosen it at random;
      // loosening only adds slack to the coupling constraints.
      std::vector<EdgeLabeling> xs;
      for (int s = 0; s < d.root_count(); ++s) {
        const SubproblemSolution sol = solve_subproblem(inst, d, s, x);
        EdgeLabeling v(inst.edge_count(), 0.0);
        for (int e : inst.positive_edges()) {
          v[e] = std::min(1.0, sol.f[e] + (u(rng) < 0.3 ? u(rng) : 0.0));
        }
        for (int e : d.owned_negative(s)) {
          v[e] = std::max(0.0, 1.0 - sol.f[e] - (u(rng) < 0.3 ? u(rng) : 0.0));
        }
        xs.push_back(std::move(v));
      }
      if (!augmented_feasible(inst, d, x, xs, 1e-7)) continue;
      ++samples;
      const double before = augmented_objective(inst, d, x, xs);
      const TransformedSolution t = absorb_repairs(inst, d, x, xs);
      if (augmented_objective(inst, d, t.x, t.xs) > before + 1e-9) ++raised;
      for (int s = 0; s < d.root_count(); ++s) {
        if (solve_subproblem(inst, d, s, t.x).q_value > 1e-6) {
          ++residual;
          break;
        }
      }
    }
    verdict(6, raised == 0 && residual == 0,
            fmt("repair absorption: %g samples, %g raised the objective, %g left Q > 1e-6",
                samples, raised, residual));
  }

  // 7: rounding.
  {
    std::mt19937 rng(707);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int infeasible = 0;
    for (int k = 0; k < 500; ++k) {
      const Instance& inst = sweep[k % sweep.size()];
      const Decomposition d = build_decomposition(inst, min_vertex_cover(inst, CoverMode::kExact));
      EdgeLabeling x(inst.edge_count());
      for (double& v : x) v = u(rng);
      for (const auto& r : {round_threshold(inst, x), round_parallel(inst, d, x),
                            round_serial(inst, d, x)}) {
        if (!is_multicut_feasible(inst, r)) ++infeasible;
      }
    }
    // Integral inputs: every optimal multicut, plus random multicuts.
    int optimal_inputs = 0, optimal_changed = 0;
    int random_inputs = 0, random_changed = 0, random_raised = 0;
    for (const Instance& inst : sweep) {
      const Decomposition d = build_decomposition(inst, min_vertex_cover(inst, CoverMode::kExact));
      const EdgeLabeling best = induced_cut(inst, brute_force_optimal(inst).partition);
      ++optimal_inputs;
      const double c = cc_cost(inst, best);
      for (const auto& r : {round_parallel(inst, d, best), round_serial(inst, d, best)}) {
        if (std::abs(cc_cost(inst, r) - c) > 1e-9) ++optimal_changed;
      }
      for (int t = 0; t < 2; ++t) {
        std::vector<int> labels(inst.node_count());
        for (int& l : labels) l = static_cast<int>(rng() % 3);
        const EdgeLabeling x = induced_cut(inst, canonicalize(labels));
        ++random_inputs;
        const double cx = cc_cost(inst, x);
        for (const auto& r : {round_parallel(inst, d, x), round_serial(inst, d, x)}) {
          const double cr = cc_cost(inst, r);
          if (std::abs(cr - cx) > 1e-9) ++random_changed;
          if (cr > cx + 1e-9) ++random_raised;
        }
      }
    }
    verdict(7, infeasible == 0 && optimal_changed == 0 && random_changed == 0,
            fmt("rounding: %g infeasible of 1500 fractional roundings; optimal multicuts "
                "changed cost %g/%g; ",
                infeasible, optimal_changed, 2 * optimal_inputs) +
                fmt("random multicuts changed cost %g/%g (%g raised, the rest lowered)",
                    random_changed, 2 * random_inputs, random_raised));
  }

  // 9 (its traces also feed 8): MWR on 8x8 grids.
  const std::vector<Instance> grids = grid_instances(30);
  {
    constexpr int kRepeats = 5;
    int not_worse = 0;
    std::vector<double> master_off, master_on, pivots_off, pivots_on;
    for (const Instance& inst : grids) {
      int iters[2] = {0, 0};
      for (int m = 0; m < 2; ++m) {
        SolverConfig c = config;
        c.tau = m == 0 ? 0.0 : 0.5;
        // Least of several runs per instance; master solves here take well
        // under a millisecond, so a single run is mostly timer noise.
        double best = 1e300;
        for (int rep = 0; rep < kRepeats; ++rep) {
          const SolveResult r = bdcc(inst, c);
          best = std::min(best, master_total(r.trace));
          iters[m] = r.iterations;
          if (rep == 0) traces.add(r.trace);
        }
        (m == 0 ? master_off : master_on).push_back(best);
        c.clock = ClockMode::kPivots;
        (m == 0 ? pivots_off : pivots_on).push_back(master_total(bdcc(inst, c).trace));
      }
      if (iters[1] <= iters[0]) ++not_worse;
    }
    const double off = median(master_off), on = median(master_on);
    verdict(9, not_worse >= 21 && on < off,
            fmt("MWR benefit: tau=0.5 needs <= iterations on %g/30 grids (need 21); "
                "median master time %.4f ms vs %.4f ms at tau=0; ",
                not_worse, on, off) +
                fmt("median master pivots %g vs %g", median(pivots_on), median(pivots_off)));
  }

  verdict(8, traces.ok(),
          fmt("bound discipline: %g traces, %g LB drops within a phase, %g UB < LB, ",
              traces.traces, traces.lb_drops, traces.ub_below_lb) +
              fmt("%g parallel > serial", traces.parallel_over_serial));

  // 10: pivot-clock traces are identical across thread counts and reruns.
  {
    int runs = 0, differ = 0;
    std::vector<const Instance*> pool;
    for (size_t k = 0; k < 40; ++k) pool.push_back(&sweep[k]);
    for (size_t k = 0; k < 10; ++k) pool.push_back(&grids[k]);
    for (const Instance* inst : pool) {
      SolverConfig c = config;
      c.clock = ClockMode::kPivots;
      c.seed = 99;
      const std::string one = trace_text(bdcc(*inst, c).trace);
      for (int threads : {1, 2, 4, 8}) {
        c.threads = threads;
        ++runs;
        if (trace_text(bdcc(*inst, c).trace) != one) ++differ;
      }
    }
    verdict(10, differ == 0,
            fmt("determinism: %g pivot-clock reruns over threads {1, 2, 4, 8}, %g differ",
                runs, differ));
  }

  for (int id = 1; id <= 10; ++id) std::printf("%s\n", lines[id].c_str());
  std::printf("%d of 10 criteria failed\n", failures);
  return strict && failures > 0 ? 1 : 0;
}
