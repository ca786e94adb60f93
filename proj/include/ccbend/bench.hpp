#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ccbend/graph.hpp"
#include "ccbend/master.hpp"

namespace ccbend {

struct GeneratorOptions {
  // Erdos-Renyi on `nodes` with `edge_probability`, unless grid_width > 0,
  // in which case a 4-connected grid_width x grid_height grid.
  int nodes = 10;
  double edge_probability = 0.5;
  int grid_width = 0;
  int grid_height = 0;
  double weight_low = -1.0;
  double weight_high = 1.0;
  std::uint64_t seed = 0;
};

// Weights are uniform in [weight_low, weight_high], redrawn while |w| < 0.01.
// Throws std::invalid_argument on bad parameters.
Instance generate_instance(const GeneratorOptions& options);

struct SolutionFile {
  double cost = 0.0;
  Partition partition;  // empty component_id when the file has no l lines
  EdgeLabeling x;
};

// cost line, one l line per node, one x line per edge. The cost is written
// with enough digits to read back bit for bit.
void write_solution(std::ostream& out, const Instance& inst, const EdgeLabeling& x,
                    const Partition& partition);

// Accepts fractional x values, so it also reads rounding inputs. The cost and
// l lines are optional; every edge needs exactly one x line. Throws ParseError.
SolutionFile read_solution(std::istream& in, const Instance& inst);

struct BenchConfig {
  std::vector<double> taus{0.0, 0.5};
  bool include_baseline = true;
  SolverConfig solver;
  double time_scale = 0.1;
  std::vector<double> epsilons{0.1, 1.0, 10.0};
  std::vector<double> checkpoints_s{10.0, 50.0, 100.0, 300.0};
};

struct BenchRow {
  std::string instance;
  std::string solver;  // "bdcc" or "baseline"
  double tau = 0.0;
  std::string status;
  std::string error;  // non-empty when the run threw
  double lb = 0.0;
  double ub = 0.0;
  double final_gap = 0.0;
  // First cumulative time (ms) at which ub - lb <= eps, per epsilon; empty if
  // never reached.
  std::vector<std::optional<double>> serial_time_to_gap;
  std::vector<std::optional<double>> parallel_time_to_gap;
  double serial_total_ms = 0.0;
  double parallel_total_ms = 0.0;
  int iterations = 0;
  int rows_std = 0;
  int rows_mwr = 0;
};

struct BenchReport {
  BenchConfig config;
  std::vector<BenchRow> rows;
};

struct NamedInstance {
  std::string name;
  Instance instance;
};

// Runs every instance under bdcc for each tau, then the baseline. Instances
// run on up to config.solver.threads workers, each solve single-threaded.
BenchReport run_bench(const std::vector<NamedInstance>& instances, const BenchConfig& config);

// Per-run CSV, one row per (instance, solver, tau).
void write_report_csv(std::ostream& out, const BenchReport& report);

// Percentage of instances whose gap is within eps by each scaled checkpoint,
// one row per (solver, tau, timing model).
void write_summary_csv(std::ostream& out, const BenchReport& report);

}  // namespace ccbend
