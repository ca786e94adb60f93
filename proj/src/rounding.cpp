#include "ccbend/rounding.hpp"

#include <algorithm>
#include <stdexcept>

#include "ccbend/subproblems.hpp"

namespace ccbend {

namespace {

// Threshold at 1/2 without the components pass.
EdgeLabeling threshold(const EdgeLabeling& x) {
  EdgeLabeling out(x.size());
  for (size_t e = 0; e < x.size(); ++e) out[e] = x[e] > 0.5 ? 1.0 : 0.0;
  return out;
}

Partition reference_partition(const Instance& inst, const EdgeLabeling& x) {
  return components_of(inst, threshold(x));
}

// Subproblem cost of a 2-labeling (side[root] == 0).
double two_side_cost(const Instance& inst, const Decomposition& decomp, int s,
                     const std::vector<double>& kappa, const std::vector<int>& side) {
  double cost = 0.0;
  for (int e : inst.positive_edges()) {
    if (side[inst.edge(e).i] != side[inst.edge(e).j]) cost += kappa[e];
  }
  for (int e : decomp.owned_negative(s)) {
    if (side[inst.edge(e).i] == side[inst.edge(e).j]) cost -= kappa[e];
  }
  return cost;
}

void require_length(const Instance& inst, const EdgeLabeling& x) {
  if (static_cast<int>(x.size()) != inst.edge_count()) {
    throw std::invalid_argument("labeling length does not match edge count");
  }
}

}  // namespace

EdgeLabeling round_threshold(const Instance& inst, const EdgeLabeling& x) {
  require_length(inst, x);
  return induced_cut(inst, reference_partition(inst, x));
}

std::vector<double> kappa_weights(const Instance& inst, const EdgeLabeling& x) {
  require_length(inst, x);
  std::vector<double> kappa(inst.edge_count());
  for (int e = 0; e < inst.edge_count(); ++e) {
    kappa[e] = inst.is_negative(e) ? inst.weight(e) * x[e] : inst.weight(e) * (1.0 - x[e]);
  }
  return kappa;
}

Partition root_min_cut(const Instance& inst, const Decomposition& decomp, int s,
                       const std::vector<double>& kappa, const Partition& hint) {
  EdgeLabeling x0(inst.edge_count(), 0.0);
  for (int e : decomp.owned_negative(s)) x0[e] = 1.0;
  const SubproblemSolution sol = solve_subproblem(inst, decomp, s, x0, kappa);
  const double tol = 1e-9 * (1.0 + std::abs(sol.q_value));
  const int root = decomp.root_node(s);
  const int n = inst.node_count();

  std::vector<int> side(n);
  for (int v = 0; v < n; ++v) side[v] = hint.component_id[v] != hint.component_id[root];
  if (two_side_cost(inst, decomp, s, kappa, side) <= sol.q_value + tol) {
    return canonicalize(side);
  }

  // Level sets of the node potentials; m >= 1/2 first, then every other
  // level. Their average cost is at most the LP value, so one is optimal.
  std::vector<double> levels{0.5};
  for (double m : sol.m) {
    if (m > 1e-9) levels.push_back(m);
  }
  std::vector<int> best;
  double best_cost = kInfinity;
  for (double t : levels) {
    for (int v = 0; v < n; ++v) side[v] = v != root && sol.m[v] >= t - 1e-9;
    const double c = two_side_cost(inst, decomp, s, kappa, side);
    if (c < best_cost - tol) {
      best_cost = c;
      best = side;
    }
    if (best_cost <= sol.q_value + tol) break;
  }
  return canonicalize(best);
}

EdgeLabeling round_parallel(const Instance& inst, const Decomposition& decomp,
                            const EdgeLabeling& x) {
  const std::vector<double> kappa = kappa_weights(inst, x);
  const Partition hint = reference_partition(inst, x);
  // The refinement cuts every edge some root cuts, which covers both the max
  // rule on attractive edges and the ownership rule on repulsive ones.
  std::vector<Partition> parts;
  for (int s = 0; s < decomp.root_count(); ++s) {
    parts.push_back(root_min_cut(inst, decomp, s, kappa, hint));
  }
  if (parts.empty()) return EdgeLabeling(inst.edge_count(), 0.0);
  return induced_cut(inst, common_refinement(parts));
}

EdgeLabeling round_serial(const Instance& inst, const Decomposition& decomp,
                          const EdgeLabeling& x) {
  std::vector<double> kappa = kappa_weights(inst, x);
  const Partition hint = reference_partition(inst, x);
  EdgeLabeling cut(inst.edge_count(), 0.0);
  std::vector<Partition> parts;
  for (int s = 0; s < decomp.root_count(); ++s) {
    parts.push_back(root_min_cut(inst, decomp, s, kappa, hint));
    const EdgeLabeling xs = induced_cut(inst, parts.back());
    for (int e = 0; e < inst.edge_count(); ++e) {
      cut[e] = std::max(cut[e], xs[e]);
      kappa[e] *= 1.0 - cut[e];
    }
  }
  if (parts.empty()) return cut;
  return induced_cut(inst, common_refinement(parts));
}

}  // namespace ccbend
