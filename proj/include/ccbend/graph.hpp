#pragma once

#include <cstddef>
#include <istream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ccbend {

// Global numeric tolerances. Solvers take copies through SolverConfig, these
// are the defaults.
inline constexpr double kIntegralityTol = 1e-6;
inline constexpr double kFeasibilityTol = 1e-7;
inline constexpr double kViolationTol = 1e-6;

struct Edge {
  int i = 0;
  int j = 0;
  double weight = 0.0;
};

// Weighted undirected graph. Edges are stored once with i < j and every other
// module addresses them by their index in edges(). Edges with weight >= 0 form
// the attractive set (E+), the rest the repulsive set (E-).
class Instance {
 public:
  Instance() = default;
  // Validates and canonicalizes; throws std::invalid_argument on self-loops,
  // out-of-range ids, duplicates or non-finite weights.
  Instance(int node_count, std::vector<Edge> edges);

  int node_count() const { return node_count_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int e) const { return edges_[e]; }
  double weight(int e) const { return edges_[e].weight; }
  bool is_negative(int e) const { return edges_[e].weight < 0.0; }

  const std::vector<int>& positive_edges() const { return positive_; }
  const std::vector<int>& negative_edges() const { return negative_; }
  // Edge indices incident to `node`, ascending.
  const std::vector<int>& incident(int node) const { return incident_[node]; }

  // Index of edge {a, b} or -1.
  int find_edge(int a, int b) const;

  // Sum of -w over E-: the objective constant of the master problem.
  double negative_mass() const;

 private:
  int node_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<int> positive_;
  std::vector<int> negative_;
  std::vector<std::vector<int>> incident_;
};

// Fractional or binary cut indicator per edge (1 = cut).
using EdgeLabeling = std::vector<double>;

// Component id per node, contiguous 0..k-1, numbered by smallest member.
struct Partition {
  std::vector<int> component_id;

  int component_count() const;
  bool operator==(const Partition&) const = default;
};

class ParseError : public std::runtime_error {
 public:
  enum class Kind {
    kMalformedLine,
    kMissingHeader,
    kNodeOutOfRange,
    kDuplicateEdge,
    kNonFiniteWeight,
    kSelfLoop,
    kEdgeCountMismatch,
  };
  ParseError(Kind kind, int line, const std::string& what);
  Kind kind() const { return kind_; }
  int line() const { return line_; }

 private:
  Kind kind_;
  int line_;
};

Instance parse_instance(std::istream& in);
Instance parse_instance_string(const std::string& text);
Instance read_instance_file(const std::string& path);
void write_instance(std::ostream& out, const Instance& inst);

// Correlation clustering objective: sum over E- of -w (1 - x) plus sum over
// E+ of w x.
double cc_cost(const Instance& inst, const EdgeLabeling& x);

bool is_binary(const EdgeLabeling& x, double tol = kIntegralityTol);

// True iff the cut edges are exactly the edges straddling components of the
// uncut subgraph. Throws on non-binary input.
bool is_multicut_feasible(const Instance& inst, const EdgeLabeling& x);

// Components of the subgraph of uncut edges. Throws on non-binary input.
Partition components_of(const Instance& inst, const EdgeLabeling& x);

// Components of the subgraph formed by edges with edge_connects[e] set.
Partition components_over(const Instance& inst,
                          const std::vector<bool>& edge_connects);

EdgeLabeling induced_cut(const Instance& inst, const Partition& p);

// Relabels arbitrary component ids into canonical form.
Partition canonicalize(std::vector<int> labels);

// Common refinement: nodes share a block iff they share a block in every
// input partition.
Partition common_refinement(const std::vector<Partition>& parts);

struct BruteForceResult {
  double cost = 0.0;
  Partition partition;
};

inline constexpr int kBruteForceMaxNodes = 12;

// Enumerates every set partition (restricted growth strings). Ties go to the
// lexicographically smallest component_id vector, which is the enumeration
// order. Throws std::invalid_argument for more than kBruteForceMaxNodes nodes.
BruteForceResult brute_force_optimal(const Instance& inst);

}  // namespace ccbend
