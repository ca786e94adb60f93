#pragma once

#include <vector>

#include "ccbend/graph.hpp"
#include "ccbend/lp.hpp"

namespace ccbend {

enum class CoverMode { kExact, kGreedy };

// Vertex cover of the repulsive edges, ascending node ids. Exact mode solves
// the cover ILP and prefers lower ids among minimum covers; greedy mode picks
// the node covering the most uncovered repulsive edges (ties to lowest id).
// Throws LpError if the exact solve hits its node limit.
std::vector<int> min_vertex_cover(const Instance& inst, CoverMode mode,
                                  const MilpOptions& options = {});

// Benders decomposition of the repulsive edges over subproblem roots.
class Decomposition {
 public:
  Decomposition() = default;

  // Each repulsive edge goes to its lowest-id endpoint in `cover`; roots that
  // end up owning nothing are dropped. Throws std::invalid_argument if
  // `cover` misses a repulsive edge.
  Decomposition(const Instance& inst, const std::vector<int>& cover);

  const std::vector<int>& roots() const { return roots_; }
  int root_count() const { return static_cast<int>(roots_.size()); }
  int root_node(int s) const { return roots_[s]; }

  // Subproblem index (into roots()) owning repulsive edge e, or -1 for
  // attractive edges.
  int owner(int e) const { return owner_[e]; }

  // Repulsive edges owned by subproblem s, ascending.
  const std::vector<int>& owned_negative(int s) const { return owned_negative_[s]; }
  // Attractive edges incident to the root of subproblem s, ascending.
  const std::vector<int>& root_positive(int s) const { return root_positive_[s]; }

  // Subproblem index rooted at `node`, or -1.
  int subproblem_of(int node) const;

 private:
  std::vector<int> roots_;
  std::vector<int> owner_;
  std::vector<std::vector<int>> owned_negative_;
  std::vector<std::vector<int>> root_positive_;
};

Decomposition build_decomposition(const Instance& inst, const std::vector<int>& cover);

}  // namespace ccbend
