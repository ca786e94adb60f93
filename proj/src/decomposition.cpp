#include "ccbend/decomposition.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace ccbend {

namespace {

std::vector<int> greedy_cover(const Instance& inst) {
  std::vector<bool> covered(inst.edge_count(), false);
  std::vector<int> cover;
  int remaining = static_cast<int>(inst.negative_edges().size());
  while (remaining > 0) {
    int best = -1, best_gain = 0;
    for (int v = 0; v < inst.node_count(); ++v) {
      int gain = 0;
      for (int e : inst.incident(v)) gain += inst.is_negative(e) && !covered[e];
      if (gain > best_gain) {
        best_gain = gain;
        best = v;
      }
    }
    cover.push_back(best);
    for (int e : inst.incident(best)) {
      if (inst.is_negative(e) && !covered[e]) {
        covered[e] = true;
        --remaining;
      }
    }
  }
  std::sort(cover.begin(), cover.end());
  return cover;
}

std::vector<int> exact_cover(const Instance& inst, const MilpOptions& options) {
  // Nodes touching a repulsive edge become binaries. Cost 1 + eps(v) with
  // eps increasing in v and summing below 1/2: minimum cardinality first,
  // lower ids among equally small covers.
  const int n = inst.node_count();
  std::map<int, int> var_of;
  for (int e : inst.negative_edges()) {
    var_of.emplace(inst.edge(e).i, 0);
    var_of.emplace(inst.edge(e).j, 0);
  }
  LpProblem p;
  const double scale = 1.0 / ((n + 1.0) * (n + 1.0));
  for (auto& [v, var] : var_of) var = p.add_variable(0.0, 1.0, 1.0 + (v + 1) * scale, true);
  for (int e : inst.negative_edges()) {
    p.add_constraint({{var_of[inst.edge(e).i], 1.0}, {var_of[inst.edge(e).j], 1.0}},
                     Relation::kGreaterEqual, 1.0);
  }
  const MilpResult r = solve_binary_milp(p, options);
  if (r.status != MilpStatus::kOptimal) {
    throw LpError(std::string("vertex cover solve ended with status ") +
                  to_string(r.status));
  }
  std::vector<int> cover;
  for (const auto& [v, var] : var_of) {
    if (r.values[var] > 0.5) cover.push_back(v);
  }
  return cover;
}

}  // namespace

std::vector<int> min_vertex_cover(const Instance& inst, CoverMode mode,
                                  const MilpOptions& options) {
  if (inst.negative_edges().empty()) return {};
  return mode == CoverMode::kExact ? exact_cover(inst, options) : greedy_cover(inst);
}

Decomposition::Decomposition(const Instance& inst, const std::vector<int>& cover) {
  std::vector<bool> in_cover(inst.node_count(), false);
  for (int v : cover) {
    if (v < 0 || v >= inst.node_count()) throw std::invalid_argument("cover node out of range");
    in_cover[v] = true;
  }
  std::vector<int> owner_node(inst.edge_count(), -1);
  std::vector<bool> owns(inst.node_count(), false);
  for (int e : inst.negative_edges()) {
    const Edge& ed = inst.edge(e);
    if (in_cover[ed.i]) {
      owner_node[e] = ed.i;
    } else if (in_cover[ed.j]) {
      owner_node[e] = ed.j;
    } else {
      throw std::invalid_argument("cover misses repulsive edge (" + std::to_string(ed.i) +
                                  "," + std::to_string(ed.j) + ")");
    }
    owns[owner_node[e]] = true;
  }
  std::vector<int> index_of(inst.node_count(), -1);
  for (int v = 0; v < inst.node_count(); ++v) {
    if (!owns[v]) continue;
    index_of[v] = static_cast<int>(roots_.size());
    roots_.push_back(v);
  }
  owner_.assign(inst.edge_count(), -1);
  owned_negative_.assign(roots_.size(), {});
  root_positive_.assign(roots_.size(), {});
  for (int e : inst.negative_edges()) {
    owner_[e] = index_of[owner_node[e]];
    owned_negative_[owner_[e]].push_back(e);
  }
  for (int s = 0; s < root_count(); ++s) {
    for (int e : inst.incident(roots_[s])) {
      if (!inst.is_negative(e)) root_positive_[s].push_back(e);
    }
  }
}

int Decomposition::subproblem_of(int node) const {
  const auto it = std::lower_bound(roots_.begin(), roots_.end(), node);
  return it != roots_.end() && *it == node ? static_cast<int>(it - roots_.begin()) : -1;
}

Decomposition build_decomposition(const Instance& inst, const std::vector<int>& cover) {
  return Decomposition(inst, cover);
}

}  // namespace ccbend
