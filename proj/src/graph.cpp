#include "ccbend/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

namespace ccbend {

namespace {

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int find(int a) {
    while (parent_[a] != a) {
      parent_[a] = parent_[parent_[a]];
      a = parent_[a];
    }
    return a;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) std::swap(a, b);
    parent_[a] = b;
  }

 private:
  std::vector<int> parent_;
};

void require_binary(const EdgeLabeling& x) {
  if (!is_binary(x)) throw std::invalid_argument("labeling is not binary");
}

void require_length(const Instance& inst, const EdgeLabeling& x) {
  if (static_cast<int>(x.size()) != inst.edge_count()) {
    throw std::invalid_argument("labeling length " + std::to_string(x.size()) +
                                " does not match edge count " +
                                std::to_string(inst.edge_count()));
  }
}

}  // namespace

Instance::Instance(int node_count, std::vector<Edge> edges)
    : node_count_(node_count), edges_(std::move(edges)) {
  if (node_count_ < 0) throw std::invalid_argument("negative node count");
  std::set<std::pair<int, int>> seen;
  incident_.assign(node_count_, {});
  for (int e = 0; e < edge_count(); ++e) {
    Edge& ed = edges_[e];
    if (ed.i > ed.j) std::swap(ed.i, ed.j);
    if (ed.i < 0 || ed.j >= node_count_) {
      throw std::invalid_argument("edge " + std::to_string(e) +
                                  " references a node out of range");
    }
    if (ed.i == ed.j) {
      throw std::invalid_argument("edge " + std::to_string(e) + " is a self-loop");
    }
    if (!std::isfinite(ed.weight)) {
      throw std::invalid_argument("edge " + std::to_string(e) +
                                  " has a non-finite weight");
    }
    if (!seen.emplace(ed.i, ed.j).second) {
      throw std::invalid_argument("duplicate edge (" + std::to_string(ed.i) +
                                  "," + std::to_string(ed.j) + ")");
    }
    (ed.weight < 0.0 ? negative_ : positive_).push_back(e);
    incident_[ed.i].push_back(e);
    incident_[ed.j].push_back(e);
  }
}

int Instance::find_edge(int a, int b) const {
  if (a > b) std::swap(a, b);
  if (a < 0 || b >= node_count_) return -1;
  for (int e : incident_[a]) {
    if (edges_[e].i == a && edges_[e].j == b) return e;
  }
  return -1;
}

double Instance::negative_mass() const {
  double total = 0.0;
  for (int e : negative_) total -= edges_[e].weight;
  return total;
}

int Partition::component_count() const {
  if (component_id.empty()) return 0;
  return *std::max_element(component_id.begin(), component_id.end()) + 1;
}

ParseError::ParseError(Kind kind, int line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what),
      kind_(kind),
      line_(line) {}

namespace {

bool parse_int(const std::string& tok, long long& out) {
  const char* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, out);
  return ec == std::errc() && ptr == end;
}

bool parse_double(const std::string& tok, double& out) {
  char* end = nullptr;
  out = std::strtod(tok.c_str(), &end);
  return !tok.empty() && end == tok.c_str() + tok.size();
}

}  // namespace

Instance parse_instance(std::istream& in) {
  using Kind = ParseError::Kind;
  std::string line;
  int line_no = 0;
  long long n = -1, m = -1;
  std::vector<Edge> edges;
  std::set<std::pair<int, int>> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty() || tok[0][0] == '#') continue;
    if (tok[0] == "p") {
      if (n >= 0) throw ParseError(Kind::kMalformedLine, line_no, "second header");
      if (tok.size() != 4 || tok[1] != "cc" || !parse_int(tok[2], n) ||
          !parse_int(tok[3], m) || n < 0 || m < 0) {
        throw ParseError(Kind::kMalformedLine, line_no,
                         "expected 'p cc <n> <m>'");
      }
      continue;
    }
    if (tok[0] != "e") {
      throw ParseError(Kind::kMalformedLine, line_no,
                       "unknown record '" + tok[0] + "'");
    }
    if (n < 0) throw ParseError(Kind::kMissingHeader, line_no, "edge before header");
    long long a = 0, b = 0;
    double w = 0.0;
    if (tok.size() != 4 || !parse_int(tok[1], a) || !parse_int(tok[2], b) ||
        !parse_double(tok[3], w)) {
      throw ParseError(Kind::kMalformedLine, line_no, "expected 'e <i> <j> <w>'");
    }
    if (a < 0 || b < 0 || a >= n || b >= n) {
      throw ParseError(Kind::kNodeOutOfRange, line_no, "node id out of range");
    }
    if (a == b) throw ParseError(Kind::kSelfLoop, line_no, "self-loop");
    if (!std::isfinite(w)) {
      throw ParseError(Kind::kNonFiniteWeight, line_no, "non-finite weight");
    }
    if (a > b) std::swap(a, b);
    if (!seen.emplace(static_cast<int>(a), static_cast<int>(b)).second) {
      throw ParseError(Kind::kDuplicateEdge, line_no,
                       "duplicate edge (" + std::to_string(a) + "," +
                           std::to_string(b) + ")");
    }
    edges.push_back({static_cast<int>(a), static_cast<int>(b), w});
  }
  if (n < 0) throw ParseError(Kind::kMissingHeader, line_no, "missing 'p cc' header");
  if (static_cast<long long>(edges.size()) != m) {
    throw ParseError(Kind::kEdgeCountMismatch, line_no,
                     "header announces " + std::to_string(m) + " edges, found " +
                         std::to_string(edges.size()));
  }
  return Instance(static_cast<int>(n), std::move(edges));
}

Instance parse_instance_string(const std::string& text) {
  std::istringstream in(text);
  return parse_instance(in);
}

Instance read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file " + path);
  return parse_instance(in);
}

void write_instance(std::ostream& out, const Instance& inst) {
  out << "p cc " << inst.node_count() << ' ' << inst.edge_count() << '\n';
  char buf[64];
  for (const Edge& e : inst.edges()) {
    auto res = std::to_chars(buf, buf + sizeof(buf), e.weight);
    out << "e " << e.i << ' ' << e.j << ' ' << std::string(buf, res.ptr) << '\n';
  }
}

double cc_cost(const Instance& inst, const EdgeLabeling& x) {
  require_length(inst, x);
  double cost = 0.0;
  for (int e = 0; e < inst.edge_count(); ++e) {
    const double w = inst.weight(e);
    cost += w < 0.0 ? -w * (1.0 - x[e]) : w * x[e];
  }
  return cost;
}

bool is_binary(const EdgeLabeling& x, double tol) {
  return std::all_of(x.begin(), x.end(), [tol](double v) {
    return std::abs(v) <= tol || std::abs(v - 1.0) <= tol;
  });
}

bool is_multicut_feasible(const Instance& inst, const EdgeLabeling& x) {
  require_length(inst, x);
  require_binary(x);
  const Partition p = components_of(inst, x);
  for (int e = 0; e < inst.edge_count(); ++e) {
    const bool straddles =
        p.component_id[inst.edge(e).i] != p.component_id[inst.edge(e).j];
    if (straddles != (x[e] > 0.5)) return false;
  }
  return true;
}

Partition components_over(const Instance& inst,
                          const std::vector<bool>& edge_connects) {
  UnionFind uf(inst.node_count());
  for (int e = 0; e < inst.edge_count(); ++e) {
    if (edge_connects[e]) uf.unite(inst.edge(e).i, inst.edge(e).j);
  }
  std::vector<int> labels(inst.node_count());
  for (int v = 0; v < inst.node_count(); ++v) labels[v] = uf.find(v);
  return canonicalize(std::move(labels));
}

Partition components_of(const Instance& inst, const EdgeLabeling& x) {
  require_length(inst, x);
  require_binary(x);
  std::vector<bool> uncut(inst.edge_count());
  for (int e = 0; e < inst.edge_count(); ++e) uncut[e] = x[e] < 0.5;
  return components_over(inst, uncut);
}

EdgeLabeling induced_cut(const Instance& inst, const Partition& p) {
  if (static_cast<int>(p.component_id.size()) != inst.node_count()) {
    throw std::invalid_argument("partition size does not match node count");
  }
  EdgeLabeling x(inst.edge_count());
  for (int e = 0; e < inst.edge_count(); ++e) {
    x[e] = p.component_id[inst.edge(e).i] != p.component_id[inst.edge(e).j] ? 1.0
                                                                             : 0.0;
  }
  return x;
}

Partition canonicalize(std::vector<int> labels) {
  std::unordered_map<int, int> remap;
  for (int& l : labels) {
    auto [it, inserted] = remap.emplace(l, static_cast<int>(remap.size()));
    l = it->second;
  }
  return Partition{std::move(labels)};
}

Partition common_refinement(const std::vector<Partition>& parts) {
  if (parts.empty()) return {};
  const std::size_t n = parts.front().component_id.size();
  std::map<std::vector<int>, int> blocks;
  std::vector<int> labels(n);
  std::vector<int> key(parts.size());
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t k = 0; k < parts.size(); ++k) {
      key[k] = parts[k].component_id.at(v);
    }
    labels[v] = blocks.emplace(key, static_cast<int>(blocks.size())).first->second;
  }
  return canonicalize(std::move(labels));
}

BruteForceResult brute_force_optimal(const Instance& inst) {
  const int n = inst.node_count();
  if (n > kBruteForceMaxNodes) {
    throw std::invalid_argument("brute force limited to " +
                                std::to_string(kBruteForceMaxNodes) + " nodes");
  }
  BruteForceResult best;
  best.partition.component_id.assign(n, 0);
  if (n == 0) return best;
  best.cost = cc_cost(inst, induced_cut(inst, best.partition));

  // Restricted growth strings: a[0] = 0, a[k] <= 1 + max(a[0..k-1]).
  std::vector<int> a(n, 0), prefix_max(n, 0);
  Partition p;
  while (true) {
    int k = n - 1;
    while (k > 0 && a[k] > prefix_max[k - 1]) --k;
    if (k == 0) break;
    ++a[k];
    prefix_max[k] = std::max(prefix_max[k - 1], a[k]);
    for (int t = k + 1; t < n; ++t) {
      a[t] = 0;
      prefix_max[t] = prefix_max[k];
    }
    p.component_id = a;
    const double cost = cc_cost(inst, induced_cut(inst, p));
    if (cost < best.cost - 1e-12) {
      best.cost = cost;
      best.partition = p;
    }
  }
  return best;
}

}  // namespace ccbend
