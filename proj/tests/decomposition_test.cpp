#include <algorithm>

#include "ccbend/decomposition.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace ccbend;

namespace {

const char* kTriangle = "p cc 3 3\ne 0 1 1.0\ne 1 2 1.0\ne 0 2 -2.0";
const char* kNegTriangle = "p cc 3 3\ne 0 1 -1\ne 1 2 -1\ne 0 2 -1";

bool covers(const Instance& inst, const std::vector<int>& cover) {
  for (int e : inst.negative_edges()) {
    const bool a = std::count(cover.begin(), cover.end(), inst.edge(e).i) > 0;
    const bool b = std::count(cover.begin(), cover.end(), inst.edge(e).j) > 0;
    if (!a && !b) return false;
  }
  return true;
}

int cover_number(const Instance& inst) {
  const int n = inst.node_count();
  int best = n;
  for (int mask = 0; mask < (1 << n); ++mask) {
    std::vector<int> c;
    for (int v = 0; v < n; ++v) {
      if ((mask >> v) & 1) c.push_back(v);
    }
    if (covers(inst, c)) best = std::min(best, static_cast<int>(c.size()));
  }
  return best;
}

}  // namespace

TEST_CASE("vertex cover examples") {
  CHECK(min_vertex_cover(parse_instance_string(kTriangle), CoverMode::kExact) ==
        std::vector<int>{0});
  CHECK(min_vertex_cover(parse_instance_string(kTriangle), CoverMode::kGreedy) ==
        std::vector<int>{0});
  const Instance star = parse_instance_string(
      "p cc 6 5\ne 0 4 -1\ne 1 4 -1\ne 2 4 -1\ne 3 4 -1\ne 4 5 -1");
  CHECK(min_vertex_cover(star, CoverMode::kExact) == std::vector<int>{4});
  CHECK(min_vertex_cover(star, CoverMode::kGreedy) == std::vector<int>{4});
  CHECK(min_vertex_cover(parse_instance_string(kNegTriangle), CoverMode::kExact) ==
        std::vector<int>{0, 1});
  CHECK(min_vertex_cover(parse_instance_string("p cc 2 1\ne 0 1 1"), CoverMode::kExact)
            .empty());
}

TEST_CASE("decomposition examples") {
  const Instance t1 = parse_instance_string(kTriangle);
  const Decomposition d = build_decomposition(t1, {0});
  CHECK(d.roots() == std::vector<int>{0});
  CHECK(d.owned_negative(0) == std::vector<int>{2});
  CHECK(d.root_positive(0) == std::vector<int>{0});
  CHECK(d.owner(0) == -1);
  CHECK(d.owner(2) == 0);

  const Instance neg = parse_instance_string(kNegTriangle);
  const Decomposition dn = build_decomposition(neg, {0, 1});
  REQUIRE(dn.roots() == std::vector<int>{0, 1});
  // Edges in canonical order: (0,1), (1,2), (0,2).
  CHECK(dn.owner(0) == 0);
  CHECK(dn.owner(1) == 1);
  CHECK(dn.owner(2) == 0);

  const Decomposition extra = build_decomposition(t1, {0, 1});
  CHECK(extra.roots() == std::vector<int>{0});
  CHECK(extra.subproblem_of(1) == -1);

  CHECK_THROWS_AS(build_decomposition(t1, {1}), std::invalid_argument);
}

TEST_CASE("covers on random graphs") {
  for (unsigned seed = 0; seed < 100; ++seed) {
    const Instance inst = oracle::random_instance(4 + seed % 8, 0.5, 500 + seed);
    const auto exact = min_vertex_cover(inst, CoverMode::kExact);
    const auto greedy = min_vertex_cover(inst, CoverMode::kGreedy);
    CHECK(covers(inst, exact));
    CHECK(covers(inst, greedy));
    CHECK(exact.size() <= greedy.size());
    if (!inst.negative_edges().empty()) {
      CHECK(static_cast<int>(exact.size()) == cover_number(inst));
    }
    CHECK(min_vertex_cover(inst, CoverMode::kExact) == exact);

    const Decomposition d = build_decomposition(inst, exact);
    std::vector<int> seen(inst.edge_count(), 0);
    for (int s = 0; s < d.root_count(); ++s) {
      CHECK_FALSE(d.owned_negative(s).empty());
      for (int e : d.owned_negative(s)) {
        ++seen[e];
        CHECK(d.owner(e) == s);
        const Edge& ed = inst.edge(e);
        CHECK((ed.i == d.root_node(s) || ed.j == d.root_node(s)));
      }
      for (int e : d.root_positive(s)) CHECK_FALSE(inst.is_negative(e));
    }
    for (int e = 0; e < inst.edge_count(); ++e) CHECK(seen[e] == (inst.is_negative(e) ? 1 : 0));
  }
}
