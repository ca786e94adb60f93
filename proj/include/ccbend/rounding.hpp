#pragma once

#include <vector>

#include "ccbend/decomposition.hpp"
#include "ccbend/graph.hpp"

namespace ccbend {

// Cut every edge above 1/2, then keep only the cuts between the components
// that remain. Always multicut-feasible.
EdgeLabeling round_threshold(const Instance& inst, const EdgeLabeling& x);

// kappa = phi (1 - x) on attractive edges, phi x on repulsive ones.
std::vector<double> kappa_weights(const Instance& inst, const EdgeLabeling& x);

// Best 2-partition for root s under edge weights `kappa`, owned repulsive
// edges counted as cut in the reference labeling. Side 0 holds the root.
// Among minimizers, the root's own component in `hint` wins when it is one.
Partition root_min_cut(const Instance& inst, const Decomposition& decomp, int s,
                       const std::vector<double>& kappa, const Partition& hint);

// One min-cut per root on the kappa weights of x, all against the same
// kappa; returns the cut of the common refinement of the root partitions.
EdgeLabeling round_parallel(const Instance& inst, const Decomposition& decomp,
                            const EdgeLabeling& x);

// Roots in ascending order; edges cut by earlier roots become free for later
// ones.
EdgeLabeling round_serial(const Instance& inst, const Decomposition& decomp,
                          const EdgeLabeling& x);

}  // namespace ccbend
