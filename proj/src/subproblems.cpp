#include "ccbend/subproblems.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>
#include <string>

namespace ccbend {

namespace {

// The dual LP plus the maps needed to read its solution back per edge/node.
struct DualLayout {
  LpProblem lp{Sense::kMaximize};
  int root = -1;
  std::vector<int> lam_minus, lam_plus, psi_minus, psi_plus;  // by edge
  std::vector<int> bound_row;                                 // by edge
  std::vector<int> node_row;                                  // by node
  std::vector<int> var_edge;                                  // by variable
  std::vector<double> original_objective;                     // by variable
};

void check_subproblem(const Decomposition& decomp, int s) {
  if (s < 0 || s >= decomp.root_count()) {
    throw std::out_of_range("subproblem " + std::to_string(s) + " does not exist");
  }
}

int other_end(const Edge& ed, int v) { return ed.i == v ? ed.j : ed.i; }

DualLayout build_layout(const Instance& inst, const Decomposition& decomp, int s,
                        const EdgeLabeling& x, const std::vector<double>& w) {
  check_subproblem(decomp, s);
  if (static_cast<int>(x.size()) != inst.edge_count() ||
      static_cast<int>(w.size()) != inst.edge_count()) {
    throw std::invalid_argument("labeling or weights do not match the edge count");
  }
  DualLayout d;
  const int m = inst.edge_count();
  d.root = decomp.root_node(s);
  d.lam_minus.assign(m, -1);
  d.lam_plus.assign(m, -1);
  d.psi_minus.assign(m, -1);
  d.psi_plus.assign(m, -1);
  d.bound_row.assign(m, -1);
  d.node_row.assign(inst.node_count(), -1);

  auto add_var = [&](int e, double coef) {
    d.var_edge.push_back(e);
    d.original_objective.push_back(coef);
    return d.lp.add_variable(0.0, kInfinity, coef);
  };
  std::vector<SparseTerms> node_terms(inst.node_count());

  for (int e : inst.positive_edges()) {
    const Edge& ed = inst.edge(e);
    if (ed.i == d.root || ed.j == d.root) {
      const int v = other_end(ed, d.root);
      d.psi_plus[e] = add_var(e, -x[e]);
      node_terms[v].emplace_back(d.psi_plus[e], -1.0);
    } else {
      d.lam_minus[e] = add_var(e, -x[e]);
      d.lam_plus[e] = add_var(e, -x[e]);
      node_terms[ed.i].emplace_back(d.lam_plus[e], 1.0);
      node_terms[ed.i].emplace_back(d.lam_minus[e], -1.0);
      node_terms[ed.j].emplace_back(d.lam_minus[e], 1.0);
      node_terms[ed.j].emplace_back(d.lam_plus[e], -1.0);
    }
  }
  for (int e : decomp.owned_negative(s)) {
    d.psi_minus[e] = add_var(e, x[e]);
    node_terms[other_end(inst.edge(e), d.root)].emplace_back(d.psi_minus[e], 1.0);
  }

  for (int v = 0; v < inst.node_count(); ++v) {
    if (v == d.root || node_terms[v].empty()) continue;
    d.node_row[v] = d.lp.add_constraint(std::move(node_terms[v]), Relation::kLessEqual, 0.0);
  }
  for (int e = 0; e < m; ++e) {
    if (d.lam_minus[e] >= 0) {
      d.bound_row[e] = d.lp.add_constraint({{d.lam_minus[e], 1.0}, {d.lam_plus[e], 1.0}},
                                           Relation::kLessEqual, w[e]);
    } else if (d.psi_plus[e] >= 0) {
      d.bound_row[e] = d.lp.add_constraint({{d.psi_plus[e], 1.0}}, Relation::kLessEqual, w[e]);
    } else if (d.psi_minus[e] >= 0) {
      d.bound_row[e] =
          d.lp.add_constraint({{d.psi_minus[e], 1.0}}, Relation::kLessEqual, -w[e]);
    }
  }
  return d;
}

double value_or_zero(const std::vector<double>& values, int var) {
  return var >= 0 ? values[var] : 0.0;
}

SparseTerms compact(const Instance& inst, const DualLayout& d,
                    const std::vector<double>& values) {
  SparseTerms omega;
  for (int e = 0; e < inst.edge_count(); ++e) {
    double c = 0.0;
    if (d.lam_minus[e] >= 0) {
      c = -(values[d.lam_minus[e]] + values[d.lam_plus[e]]);
    } else if (d.psi_plus[e] >= 0) {
      c = -values[d.psi_plus[e]];
    } else if (d.psi_minus[e] >= 0) {
      c = values[d.psi_minus[e]];
    }
    if (std::abs(c) > 1e-12) omega.emplace_back(e, c);
  }
  return omega;
}

SubproblemSolution solve_with(const Instance& inst, const Decomposition& decomp, int s,
                              const EdgeLabeling& x, const std::vector<double>& w) {
  const DualLayout d = build_layout(inst, decomp, s, x, w);
  const LpSolution lp = solve_lp(d.lp);
  if (lp.status != LpStatus::kOptimal) {
    throw LpError(std::string("subproblem dual LP ended ") + to_string(lp.status));
  }
  const int m = inst.edge_count();
  SubproblemSolution sol;
  sol.subproblem = s;
  sol.q_value = lp.objective;
  sol.pivots = lp.pivots;
  sol.f.assign(m, 0.0);
  sol.lambda_minus.assign(m, 0.0);
  sol.lambda_plus.assign(m, 0.0);
  sol.psi_minus.assign(m, 0.0);
  sol.psi_plus.assign(m, 0.0);
  sol.m.assign(inst.node_count(), 0.0);
  for (int e = 0; e < m; ++e) {
    sol.lambda_minus[e] = value_or_zero(lp.values, d.lam_minus[e]);
    sol.lambda_plus[e] = value_or_zero(lp.values, d.lam_plus[e]);
    sol.psi_minus[e] = value_or_zero(lp.values, d.psi_minus[e]);
    sol.psi_plus[e] = value_or_zero(lp.values, d.psi_plus[e]);
    if (d.bound_row[e] >= 0) sol.f[e] = lp.duals[d.bound_row[e]];
  }
  for (int v = 0; v < inst.node_count(); ++v) {
    if (d.node_row[v] >= 0) sol.m[v] = lp.duals[d.node_row[v]];
  }

  // Evaluate the recovered primal against the primal constraints directly.
  double value = 0.0, viol = 0.0;
  for (double f : sol.f) viol = std::max(viol, -f);
  for (double mv : sol.m) viol = std::max(viol, -mv);
  for (int e = 0; e < m; ++e) {
    if (d.bound_row[e] < 0) continue;
    const Edge& ed = inst.edge(e);
    const double f = sol.f[e];
    if (d.lam_minus[e] >= 0) {
      value += w[e] * f;
      viol = std::max(viol, std::abs(sol.m[ed.i] - sol.m[ed.j]) - x[e] - f);
    } else if (d.psi_plus[e] >= 0) {
      value += w[e] * f;
      viol = std::max(viol, sol.m[other_end(ed, d.root)] - x[e] - f);
    } else {
      value -= w[e] * f;
      viol = std::max(viol, x[e] - f - sol.m[other_end(ed, d.root)]);
    }
  }
  sol.primal_value = value;
  sol.primal_violation = viol;
  return sol;
}

std::vector<double> weights_of(const Instance& inst) {
  std::vector<double> w(inst.edge_count());
  for (int e = 0; e < inst.edge_count(); ++e) w[e] = inst.weight(e);
  return w;
}

}  // namespace

const char* to_string(RowKind kind) {
  return kind == RowKind::kStandard ? "standard" : "mwr";
}

double row_activity(const BendersRow& row, const EdgeLabeling& x) {
  double total = 0.0;
  for (const auto& [e, c] : row.coefficients) total += c * x[e];
  return total;
}

LpProblem build_subproblem_dual(const Instance& inst, const Decomposition& decomp, int s,
                                const EdgeLabeling& x) {
  return build_layout(inst, decomp, s, x, weights_of(inst)).lp;
}

LpProblem build_subproblem_dual(const Instance& inst, const Decomposition& decomp, int s,
                                const EdgeLabeling& x, const std::vector<double>& weights) {
  return build_layout(inst, decomp, s, x, weights).lp;
}

SubproblemSolution solve_subproblem(const Instance& inst, const Decomposition& decomp, int s,
                                    const EdgeLabeling& x) {
  return solve_with(inst, decomp, s, x, weights_of(inst));
}

SubproblemSolution solve_subproblem(const Instance& inst, const Decomposition& decomp, int s,
                                    const EdgeLabeling& x,
                                    const std::vector<double>& weights) {
  return solve_with(inst, decomp, s, x, weights);
}

BendersRow standard_row(const SubproblemSolution& sol, const Instance& inst,
                        const Decomposition& decomp) {
  check_subproblem(decomp, sol.subproblem);
  BendersRow row;
  row.kind = RowKind::kStandard;
  row.root = decomp.root_node(sol.subproblem);
  row.q_value = sol.q_value;
  const int root = row.root;
  for (int e = 0; e < inst.edge_count(); ++e) {
    const Edge& ed = inst.edge(e);
    double c = 0.0;
    if (!inst.is_negative(e)) {
      c = (ed.i == root || ed.j == root) ? -sol.psi_plus[e]
                                         : -(sol.lambda_minus[e] + sol.lambda_plus[e]);
    } else if (decomp.owner(e) == sol.subproblem) {
      c = sol.psi_minus[e];
    }
    if (std::abs(c) > 1e-12) row.coefficients.emplace_back(e, c);
  }
  return row;
}

std::mt19937_64 mwr_stream(std::uint64_t seed, int iteration, int root) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(iteration), static_cast<std::uint32_t>(root)};
  return std::mt19937_64(seq);
}

MwrResult mwr_row(const Instance& inst, const Decomposition& decomp, int s,
                  const EdgeLabeling& x, double q_value, double tau,
                  MwrObjective objective, std::mt19937_64& rng) {
  if (!(tau >= 0.0 && tau < 1.0)) throw std::invalid_argument("tau must lie in [0, 1)");
  DualLayout d = build_layout(inst, decomp, s, x, weights_of(inst));
  const int n = d.lp.variable_count();
  std::vector<double> c(n);
  if (objective == MwrObjective::kRandom) {
    std::uniform_real_distribution<double> draw(-1.0, -1e-3);
    double norm = 0.0;
    for (double& v : c) {
      v = draw(rng);
      norm += v * v;
    }
    norm = std::sqrt(norm);
    for (double& v : c) v /= norm;
  } else {
    for (int j = 0; j < n; ++j) c[j] = -1.0 / (0.0001 + std::abs(inst.weight(d.var_edge[j])));
  }
  SparseTerms original;
  for (int j = 0; j < n; ++j) {
    d.lp.set_objective(j, c[j]);
    if (d.original_objective[j] != 0.0) original.emplace_back(j, d.original_objective[j]);
  }
  d.lp.add_constraint(std::move(original), Relation::kGreaterEqual, tau * q_value);

  const LpSolution lp = solve_lp(d.lp);
  if (lp.status != LpStatus::kOptimal) {
    throw LpError(std::string("MWR LP ended ") + to_string(lp.status));
  }
  MwrResult out;
  out.pivots = lp.pivots;
  out.row.kind = RowKind::kMwr;
  out.row.root = d.root;
  out.row.q_value = q_value;
  out.row.coefficients = compact(inst, d, lp.values);
  for (int j = 0; j < n; ++j) out.original_value += d.original_objective[j] * lp.values[j];
  return out;
}

AttractiveShortestPaths::AttractiveShortestPaths(const Instance& inst, const EdgeLabeling& x)
    : inst_(inst), x_(x) {
  if (static_cast<int>(x.size()) != inst.edge_count()) {
    throw std::invalid_argument("labeling length does not match edge count");
  }
}

double AttractiveShortestPaths::distance(int from, int to, std::vector<int>* path) {
  if (from != source_) {
    source_ = from;
    dist_.assign(inst_.node_count(), kInfinity);
    via_.assign(inst_.node_count(), -1);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    dist_[from] = 0.0;
    queue.emplace(0.0, from);
    while (!queue.empty()) {
      const auto [d, v] = queue.top();
      queue.pop();
      if (d > dist_[v]) continue;
      for (int e : inst_.incident(v)) {
        if (inst_.is_negative(e)) continue;
        const int u = other_end(inst_.edge(e), v);
        const double nd = d + std::max(0.0, x_[e]);
        if (nd < dist_[u]) {
          dist_[u] = nd;
          via_[u] = e;
          queue.emplace(nd, u);
        }
      }
    }
  }
  if (path) {
    path->clear();
    if (dist_[to] < kInfinity) {
      for (int v = to; v != from;) {
        const int e = via_[v];
        path->push_back(e);
        v = other_end(inst_.edge(e), v);
      }
      std::reverse(path->begin(), path->end());
    }
  }
  return dist_[to];
}

std::optional<ViolatedCycle> has_violated_cycle(const Instance& inst,
                                                const Decomposition& decomp, int s,
                                                const EdgeLabeling& x) {
  check_subproblem(decomp, s);
  AttractiveShortestPaths paths(inst, x);
  const int root = decomp.root_node(s);
  for (int e : decomp.owned_negative(s)) {
    const double d = paths.distance(root, other_end(inst.edge(e), root));
    if (d < x[e] - kViolationTol) return ViolatedCycle{e, d};
  }
  return std::nullopt;
}

}  // namespace ccbend
