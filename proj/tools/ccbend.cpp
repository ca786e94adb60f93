// Command-line front end: solve, baseline, brute, round, gen, bench.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "ccbend/baseline.hpp"
#include "ccbend/bench.hpp"
#include "ccbend/master.hpp"
#include "ccbend/rounding.hpp"

using namespace ccbend;

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  open_out(path) << text;
}

std::pair<int, int> parse_grid(const std::string& s) {
  int w = 0, h = 0;
  char x = 0;
  std::istringstream in(s);
  if (!(in >> w >> x >> h) || (x != 'x' && x != 'X') || !in.eof() || w < 1 || h < 1) {
    throw CLI::ValidationError("--grid", "expected WxH, got '" + s + "'");
  }
  return {w, h};
}

// Flags shared by solve and baseline.
struct SolveFlags {
  std::string instance;
  std::string trace;
  std::string solution;
  SolverConfig config;
  bool no_mwr = false;
};

void add_common(CLI::App* cmd, SolveFlags& f) {
  cmd->add_option("instance", f.instance, "Instance file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--time-limit", f.config.time_limit_s, "Seconds, checked between iterations")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--trace", f.trace, "Write the per-iteration trace CSV here");
  cmd->add_option("--solution", f.solution, "Write the solution file here");
  cmd->add_option("--clock", f.config.clock,
                  "wall: milliseconds; pivots: simplex pivots (reproducible traces)")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, ClockMode>{{"wall", ClockMode::kWall},
                                           {"pivots", ClockMode::kPivots}}))
      ->option_text("wall|pivots");
}

void report(const Instance& inst, const SolveResult& r, const SolveFlags& f) {
  std::printf("status %s\ncost %.10g\nlower_bound %.10g\niterations %d\n", to_string(r.status),
              r.cost, r.lower_bound, r.iterations);
  if (!r.trace.records.empty()) {
    const auto& last = r.trace.records.back();
    std::printf("rows_std %d\nrows_mwr %d\nserial_ms %.6g\nparallel_ms %.6g\n", last.rows_std,
                last.rows_mwr, r.trace.serial_total_ms(), r.trace.parallel_total_ms());
  }
  if (!f.trace.empty()) {
    auto out = open_out(f.trace);
    write_trace_csv(out, r.trace);
  }
  if (!f.solution.empty()) {
    auto out = open_out(f.solution);
    write_solution(out, inst, r.x, r.partition);
  }
}

int threads_from_env(int fallback) {
  if (const char* env = std::getenv("CCBEND_THREADS")) {
    const int v = std::atoi(env);
    if (v < 1) throw std::runtime_error("CCBEND_THREADS must be a positive integer");
    return v;
  }
  return fallback;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact correlation clustering by Benders decomposition"};
  app.require_subcommand(1);

  const std::map<std::string, CoverMode> cover_map{{"exact", CoverMode::kExact},
                                                   {"greedy", CoverMode::kGreedy}};

  SolveFlags solve;
  auto* solve_cmd = app.add_subcommand("solve", "Solve an instance with Benders decomposition");
  add_common(solve_cmd, solve);
  solve_cmd->add_option("--tau", solve.config.tau, "MWR optimality fraction in [0, 1); 0 = off")
      ->check(CLI::Range(0.0, 1.0));
  solve_cmd->add_flag("--no-mwr", solve.no_mwr, "Same as --tau 0");
  solve_cmd->add_option("--mwr-objective", solve.config.mwr_objective)
      ->transform(CLI::CheckedTransformer(std::map<std::string, MwrObjective>{
          {"random", MwrObjective::kRandom}, {"inverse-weight", MwrObjective::kInverseWeight}}))
      ->option_text("random|inverse-weight");
  solve_cmd->add_option("--seed", solve.config.seed);
  solve_cmd->add_option("--threads", solve.config.threads)->check(CLI::PositiveNumber);
  solve_cmd->add_option("--cover", solve.config.cover_mode)
      ->transform(CLI::CheckedTransformer(cover_map))
      ->option_text("exact|greedy");
  solve_cmd->add_option("--upper-bound", solve.config.upper_bound,
                        "Rounding used for the per-iteration upper bound")
      ->transform(CLI::CheckedTransformer(std::map<std::string, UpperBoundMethod>{
          {"threshold", UpperBoundMethod::kThreshold},
          {"parallel", UpperBoundMethod::kParallel},
          {"serial", UpperBoundMethod::kSerial}}))
      ->option_text("threshold|parallel|serial");

  SolveFlags base;
  auto* base_cmd = app.add_subcommand("baseline", "Solve with plain cycle-inequality cuts");
  add_common(base_cmd, base);

  std::string brute_instance, brute_solution;
  auto* brute_cmd = app.add_subcommand("brute", "Enumerate all partitions (n <= 12)");
  brute_cmd->add_option("instance", brute_instance)->required()->check(CLI::ExistingFile);
  brute_cmd->add_option("--solution", brute_solution);

  std::string round_instance, round_input, round_solution;
  std::string round_method = "threshold";
  CoverMode round_cover = CoverMode::kExact;
  auto* round_cmd = app.add_subcommand("round", "Round a fractional labeling to a multicut");
  round_cmd->add_option("instance", round_instance)->required()->check(CLI::ExistingFile);
  round_cmd->add_option("labeling", round_input, "Solution-format file, x values in [0, 1]")
      ->required()
      ->check(CLI::ExistingFile);
  round_cmd->add_option("--method", round_method)
      ->check(CLI::IsMember({"threshold", "parallel", "serial"}));
  round_cmd->add_option("--cover", round_cover)->transform(CLI::CheckedTransformer(cover_map))
      ->option_text("exact|greedy");
  round_cmd->add_option("--solution", round_solution);

  GeneratorOptions gen;
  std::string gen_grid, gen_out;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a seeded random instance");
  gen_cmd->add_option("--nodes,-n", gen.nodes)->check(CLI::Range(2, 1 << 20));
  gen_cmd->add_option("--p", gen.edge_probability, "Edge probability")
      ->check(CLI::Range(0.0, 1.0));
  gen_cmd->add_option("--grid", gen_grid, "4-connected WxH grid instead of Erdos-Renyi");
  gen_cmd->add_option("--wmin", gen.weight_low);
  gen_cmd->add_option("--wmax", gen.weight_high);
  gen_cmd->add_option("--seed", gen.seed);
  gen_cmd->add_option("--out,-o", gen_out, "Output file (default stdout)");

  BenchConfig bench;
  std::vector<std::string> bench_files;
  std::string bench_grid, bench_report = "-", bench_summary;
  int bench_count = 0, bench_nodes = 0;
  double bench_p = 0.5;
  bool bench_no_baseline = false;
  std::uint64_t bench_gen_seed = 1;
  auto* bench_cmd = app.add_subcommand("bench", "Run bdcc over tau values plus the baseline");
  bench_cmd->add_option("instances", bench_files, "Instance files")->check(CLI::ExistingFile);
  bench_cmd->add_option("--grid", bench_grid, "Also generate --count WxH grids");
  bench_cmd->add_option("--nodes", bench_nodes, "Also generate --count Erdos-Renyi graphs");
  bench_cmd->add_option("--p", bench_p)->check(CLI::Range(0.0, 1.0));
  bench_cmd->add_option("--count", bench_count)->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("--gen-seed", bench_gen_seed, "Seed of the first generated instance");
  bench_cmd->add_option("--taus", bench.taus)->delimiter(',')->check(CLI::Range(0.0, 1.0));
  bench_cmd->add_flag("--no-baseline", bench_no_baseline);
  bench_cmd->add_option("--time-limit", bench.solver.time_limit_s)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--time-scale", bench.time_scale, "Checkpoint scale factor")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--seed", bench.solver.seed);
  bench_cmd->add_option("--threads", bench.solver.threads, "Instances run concurrently")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--cover", bench.solver.cover_mode)
      ->transform(CLI::CheckedTransformer(cover_map))
      ->option_text("exact|greedy");
  bench_cmd->add_option("--clock", bench.solver.clock)
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, ClockMode>{{"wall", ClockMode::kWall},
                                           {"pivots", ClockMode::kPivots}}))
      ->option_text("wall|pivots");
  bench_cmd->add_option("--report", bench_report, "Per-run CSV (default stdout)");
  bench_cmd->add_option("--summary", bench_summary, "Gap-by-checkpoint CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve_cmd) {
      const Instance inst = read_instance_file(solve.instance);
      if (solve.no_mwr) solve.config.tau = 0.0;
      solve.config.threads = threads_from_env(solve.config.threads);
      report(inst, bdcc(inst, solve.config), solve);
    } else if (*base_cmd) {
      const Instance inst = read_instance_file(base.instance);
      report(inst, solve_baseline(inst, base.config), base);
    } else if (*brute_cmd) {
      const Instance inst = read_instance_file(brute_instance);
      const BruteForceResult r = brute_force_optimal(inst);
      std::printf("cost %.10g\ncomponents %d\n", r.cost, r.partition.component_count());
      if (!brute_solution.empty()) {
        auto out = open_out(brute_solution);
        write_solution(out, inst, induced_cut(inst, r.partition), r.partition);
      }
    } else if (*round_cmd) {
      const Instance inst = read_instance_file(round_instance);
      std::ifstream in(round_input);
      const SolutionFile input = read_solution(in, inst);
      EdgeLabeling x;
      if (round_method == "threshold") {
        x = round_threshold(inst, input.x);
      } else {
        const Decomposition d = build_decomposition(inst, min_vertex_cover(inst, round_cover));
        x = round_method == "parallel" ? round_parallel(inst, d, input.x)
                                       : round_serial(inst, d, input.x);
      }
      std::printf("cost %.10g\n", cc_cost(inst, x));
      if (!round_solution.empty()) {
        auto out = open_out(round_solution);
        write_solution(out, inst, x, components_of(inst, x));
      }
    } else if (*gen_cmd) {
      if (!gen_grid.empty()) std::tie(gen.grid_width, gen.grid_height) = parse_grid(gen_grid);
      std::ostringstream out;
      write_instance(out, generate_instance(gen));
      write_text(gen_out, out.str());
    } else if (*bench_cmd) {
      bench.include_baseline = !bench_no_baseline;
      bench.solver.threads = threads_from_env(bench.solver.threads);
      std::vector<NamedInstance> instances;
      for (const auto& f : bench_files) instances.push_back({f, read_instance_file(f)});
      if (bench_count > 0) {
        GeneratorOptions g;
        std::string prefix;
        if (!bench_grid.empty()) {
          std::tie(g.grid_width, g.grid_height) = parse_grid(bench_grid);
          prefix = "grid" + bench_grid;
        } else if (bench_nodes >= 2) {
          g.nodes = bench_nodes;
          g.edge_probability = bench_p;
          prefix = "er" + std::to_string(bench_nodes);
        } else {
          throw std::runtime_error("--count needs --grid or --nodes");
        }
        for (int k = 0; k < bench_count; ++k) {
          g.seed = bench_gen_seed + k;
          instances.push_back({prefix + "-s" + std::to_string(g.seed), generate_instance(g)});
        }
      }
      const BenchReport rep = run_bench(instances, bench);
      std::ostringstream rows;
      write_report_csv(rows, rep);
      write_text(bench_report, rows.str());
      if (!bench_summary.empty()) {
        std::ostringstream summary;
        write_summary_csv(summary, rep);
        write_text(bench_summary, summary.str());
      }
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "ccbend: %s\n", e.what());
    return 1;
  }
  return 0;
}
