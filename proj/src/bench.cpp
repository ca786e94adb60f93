#include "ccbend/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "ccbend/baseline.hpp"

namespace ccbend {

namespace {

std::string shortest(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string g6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string g6(const std::optional<double>& v) { return v ? g6(*v) : std::string(); }

bool parse_int(const std::string& tok, int& out) {
  const auto r = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return r.ec == std::errc() && r.ptr == tok.data() + tok.size();
}

bool parse_real(const std::string& tok, double& out) {
  const auto r = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return r.ec == std::errc() && r.ptr == tok.data() + tok.size();
}

std::optional<double> time_to_gap(const BoundsTrace& trace, double eps, bool parallel) {
  double t = 0.0;
  for (const auto& r : trace.records) {
    t += r.master_ms + (parallel ? r.max_sub_ms : r.sum_sub_ms);
    if (r.ub - r.lb <= eps) return t;
  }
  return std::nullopt;
}

BenchRow summarize(const std::string& name, const std::string& solver, double tau,
                   const SolveResult& r, const BenchConfig& config) {
  BenchRow row;
  row.instance = name;
  row.solver = solver;
  row.tau = tau;
  row.status = to_string(r.status);
  row.lb = r.lower_bound;
  row.ub = r.cost;
  row.final_gap = r.trace.records.empty() ? 0.0
                                          : r.trace.records.back().ub - r.trace.records.back().lb;
  for (double eps : config.epsilons) {
    // Instances without repulsive edges are solved before any iteration.
    const bool trivial = r.trace.records.empty();
    row.serial_time_to_gap.push_back(trivial ? std::optional<double>(0.0)
                                             : time_to_gap(r.trace, eps, false));
    row.parallel_time_to_gap.push_back(trivial ? std::optional<double>(0.0)
                                               : time_to_gap(r.trace, eps, true));
  }
  row.serial_total_ms = r.trace.serial_total_ms();
  row.parallel_total_ms = r.trace.parallel_total_ms();
  row.iterations = r.iterations;
  if (!r.trace.records.empty()) {
    row.rows_std = r.trace.records.back().rows_std;
    row.rows_mwr = r.trace.records.back().rows_mwr;
  }
  return row;
}

BenchRow failed_row(const std::string& name, const std::string& solver, double tau,
                    const std::string& what, const BenchConfig& config) {
  BenchRow row;
  row.instance = name;
  row.solver = solver;
  row.tau = tau;
  row.status = "error";
  row.error = what;
  row.serial_time_to_gap.assign(config.epsilons.size(), std::nullopt);
  row.parallel_time_to_gap.assign(config.epsilons.size(), std::nullopt);
  return row;
}

}  // namespace

Instance generate_instance(const GeneratorOptions& o) {
  const bool grid = o.grid_width > 0 || o.grid_height > 0;
  if (grid && (o.grid_width < 1 || o.grid_height < 1)) {
    throw std::invalid_argument("grid dimensions must be positive");
  }
  if (!grid && o.nodes < 2) throw std::invalid_argument("need at least 2 nodes");
  if (!grid && !(o.edge_probability > 0.0 && o.edge_probability <= 1.0)) {
    throw std::invalid_argument("edge probability must lie in (0, 1]");
  }
  if (!(o.weight_low < o.weight_high) ||
      (o.weight_high <= 0.01 && o.weight_low >= -0.01)) {
    throw std::invalid_argument("weight range leaves nothing outside (-0.01, 0.01)");
  }
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> weight(o.weight_low, o.weight_high);
  auto draw = [&] {
    double w = 0.0;
    do w = weight(rng);
    while (std::abs(w) < 0.01);
    return w;
  };
  std::vector<Edge> edges;
  int n = o.nodes;
  if (grid) {
    n = o.grid_width * o.grid_height;
    for (int r = 0; r < o.grid_height; ++r) {
      for (int c = 0; c < o.grid_width; ++c) {
        const int v = r * o.grid_width + c;
        if (c + 1 < o.grid_width) edges.push_back({v, v + 1, draw()});
        if (r + 1 < o.grid_height) edges.push_back({v, v + o.grid_width, draw()});
      }
    }
  } else {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (unit(rng) < o.edge_probability) edges.push_back({i, j, draw()});
      }
    }
  }
  return Instance(n, std::move(edges));
}

void write_solution(std::ostream& out, const Instance& inst, const EdgeLabeling& x,
                    const Partition& partition) {
  if (static_cast<int>(x.size()) != inst.edge_count()) {
    throw std::invalid_argument("labeling length does not match edge count");
  }
  out << "cost " << shortest(cc_cost(inst, x)) << '\n';
  for (int v = 0; v < static_cast<int>(partition.component_id.size()); ++v) {
    out << "l " << v << ' ' << partition.component_id[v] << '\n';
  }
  for (int e = 0; e < inst.edge_count(); ++e) {
    out << "x " << inst.edge(e).i << ' ' << inst.edge(e).j << ' ' << shortest(x[e]) << '\n';
  }
}

SolutionFile read_solution(std::istream& in, const Instance& inst) {
  using K = ParseError::Kind;
  SolutionFile sol;
  sol.x.assign(inst.edge_count(), 0.0);
  std::vector<bool> seen(inst.edge_count(), false);
  std::vector<int> labels;
  int edges_read = 0;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty() || tok[0][0] == '#') continue;
    if (tok[0] == "cost" && tok.size() == 2) {
      if (!parse_real(tok[1], sol.cost)) throw ParseError(K::kMalformedLine, lineno, "bad cost");
      if (!std::isfinite(sol.cost)) throw ParseError(K::kNonFiniteWeight, lineno, "cost");
    } else if (tok[0] == "l" && tok.size() == 3) {
      int v = 0, c = 0;
      if (!parse_int(tok[1], v) || !parse_int(tok[2], c) || c < 0) {
        throw ParseError(K::kMalformedLine, lineno, "bad label line");
      }
      if (v < 0 || v >= inst.node_count()) throw ParseError(K::kNodeOutOfRange, lineno, "node");
      if (static_cast<int>(labels.size()) != v) {
        throw ParseError(K::kMalformedLine, lineno, "label lines must list nodes in order");
      }
      labels.push_back(c);
    } else if (tok[0] == "x" && tok.size() == 4) {
      int i = 0, j = 0;
      double val = 0.0;
      if (!parse_int(tok[1], i) || !parse_int(tok[2], j) || !parse_real(tok[3], val)) {
        throw ParseError(K::kMalformedLine, lineno, "bad edge line");
      }
      if (i < 0 || j < 0 || i >= inst.node_count() || j >= inst.node_count()) {
        throw ParseError(K::kNodeOutOfRange, lineno, "node");
      }
      if (!std::isfinite(val)) throw ParseError(K::kNonFiniteWeight, lineno, "edge value");
      if (val < 0.0 || val > 1.0) {
        throw ParseError(K::kMalformedLine, lineno, "edge value outside [0, 1]");
      }
      const int e = inst.find_edge(i, j);
      if (e < 0) throw ParseError(K::kMalformedLine, lineno, "no such edge");
      if (seen[e]) throw ParseError(K::kDuplicateEdge, lineno, "edge listed twice");
      seen[e] = true;
      sol.x[e] = val;
      ++edges_read;
    } else {
      throw ParseError(K::kMalformedLine, lineno, "unrecognized line");
    }
  }
  if (edges_read != inst.edge_count()) {
    throw ParseError(K::kEdgeCountMismatch, 0,
                     "expected " + std::to_string(inst.edge_count()) + " x lines, got " +
                         std::to_string(edges_read));
  }
  if (!labels.empty()) {
    if (static_cast<int>(labels.size()) != inst.node_count()) {
      throw ParseError(K::kMalformedLine, 0, "label lines do not cover every node");
    }
    sol.partition.component_id = labels;
  }
  return sol;
}

BenchReport run_bench(const std::vector<NamedInstance>& instances, const BenchConfig& config) {
  config.solver.validate();
  if (!(config.time_scale > 0.0)) throw std::invalid_argument("time scale must be positive");
  BenchReport report;
  report.config = config;
  const int per_instance = static_cast<int>(config.taus.size()) + (config.include_baseline ? 1 : 0);
  const int jobs = static_cast<int>(instances.size()) * per_instance;
  std::vector<BenchRow> rows(jobs);

  auto run_job = [&](int job) {
    const NamedInstance& ni = instances[job / per_instance];
    const int k = job % per_instance;
    SolverConfig cfg = config.solver;
    cfg.threads = 1;
    const bool baseline = k == static_cast<int>(config.taus.size());
    const std::string solver = baseline ? "baseline" : "bdcc";
    const double tau = baseline ? 0.0 : config.taus[k];
    try {
      if (baseline) {
        rows[job] = summarize(ni.name, solver, tau, solve_baseline(ni.instance, cfg), config);
      } else {
        cfg.tau = tau;
        rows[job] = summarize(ni.name, solver, tau, bdcc(ni.instance, cfg), config);
      }
    } catch (const std::exception& e) {
      rows[job] = failed_row(ni.name, solver, tau, e.what(), config);
    }
  };

  const int workers = std::min(config.solver.threads, jobs);
  if (workers <= 1) {
    for (int j = 0; j < jobs; ++j) run_job(j);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int j = next++; j < jobs; j = next++) run_job(j);
      });
    }
    for (auto& t : pool) t.join();
  }
  report.rows = std::move(rows);
  return report;
}

void write_report_csv(std::ostream& out, const BenchReport& report) {
  const auto& eps = report.config.epsilons;
  out << "instance,solver,tau,status,lb,ub,gap,serial_ms,parallel_ms,iterations,rows_std,"
         "rows_mwr";
  for (double e : eps) out << ",serial_ms_to_gap_" << g6(e);
  for (double e : eps) out << ",parallel_ms_to_gap_" << g6(e);
  out << ",error\n";
  for (const auto& r : report.rows) {
    std::string error = r.error;
    std::replace(error.begin(), error.end(), ',', ';');
    std::replace(error.begin(), error.end(), '\n', ' ');
    out << r.instance << ',' << r.solver << ',' << (r.solver == "baseline" ? "" : g6(r.tau))
        << ',' << r.status << ',' << g6(r.lb) << ',' << g6(r.ub) << ',' << g6(r.final_gap)
        << ',' << g6(r.serial_total_ms) << ',' << g6(r.parallel_total_ms) << ','
        << r.iterations << ',' << r.rows_std << ',' << r.rows_mwr;
    for (const auto& t : r.serial_time_to_gap) out << ',' << g6(t);
    for (const auto& t : r.parallel_time_to_gap) out << ',' << g6(t);
    out << ',' << error << '\n';
  }
}

void write_summary_csv(std::ostream& out, const BenchReport& report) {
  const BenchConfig& c = report.config;
  out << "solver,tau,model,instances";
  for (double e : c.epsilons) {
    for (double t : c.checkpoints_s) out << ",eps" << g6(e) << "_at_" << g6(t * c.time_scale) << "s";
  }
  out << '\n';

  std::vector<std::pair<std::string, double>> groups;
  for (double tau : c.taus) groups.emplace_back("bdcc", tau);
  if (c.include_baseline) groups.emplace_back("baseline", 0.0);
  for (const auto& [solver, tau] : groups) {
    for (const bool parallel : {false, true}) {
      // The baseline has no subproblems to spread out; one model suffices.
      if (solver == "baseline" && parallel) continue;
      std::vector<const BenchRow*> members;
      for (const auto& r : report.rows) {
        if (r.solver == solver && (solver == "baseline" || r.tau == tau)) members.push_back(&r);
      }
      out << solver << ',' << (solver == "baseline" ? "" : g6(tau)) << ','
          << (parallel ? "parallel" : "serial") << ',' << members.size();
      for (size_t k = 0; k < c.epsilons.size(); ++k) {
        for (double t : c.checkpoints_s) {
          const double limit_ms = 1000.0 * t * c.time_scale;
          int hit = 0;
          for (const BenchRow* r : members) {
            const auto& ttg = parallel ? r->parallel_time_to_gap[k] : r->serial_time_to_gap[k];
            hit += ttg && *ttg <= limit_ms;
          }
          out << ',' << (members.empty() ? std::string() : g6(100.0 * hit / members.size()));
        }
      }
      out << '\n';
    }
  }
}

}  // namespace ccbend
