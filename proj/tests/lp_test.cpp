#include <random>

#include "ccbend/lp.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace ccbend;

TEST_CASE("max x subject to x <= 1") {
  LpProblem p(Sense::kMaximize);
  const int x = p.add_variable(0.0, kInfinity, 1.0);
  p.add_constraint({{x, 1.0}}, Relation::kLessEqual, 1.0);
  const LpSolution s = solve_lp(p);
  REQUIRE(s.status == LpStatus::kOptimal);
  CHECK(s.values[x] == doctest::Approx(1.0));
  CHECK(s.duals[0] == doctest::Approx(1.0));
  CHECK(s.dual_objective == doctest::Approx(1.0));
}

TEST_CASE("min x + y subject to x + y >= 2") {
  LpProblem p;
  const int x = p.add_variable(0.0, kInfinity, 1.0);
  const int y = p.add_variable(0.0, kInfinity, 1.0);
  p.add_constraint({{x, 1.0}, {y, 1.0}}, Relation::kGreaterEqual, 2.0);
  const LpSolution s = solve_lp(p);
  REQUIRE(s.status == LpStatus::kOptimal);
  CHECK(s.objective == doctest::Approx(2.0));
  CHECK(s.duals[0] == doctest::Approx(1.0));
}

TEST_CASE("dual signs follow d(objective)/d(rhs)") {
  // min -x s.t. x <= 3: raising the rhs lowers the objective.
  LpProblem a;
  const int x = a.add_variable(0.0, kInfinity, -1.0);
  a.add_constraint({{x, 1.0}}, Relation::kLessEqual, 3.0);
  CHECK(solve_lp(a).duals[0] == doctest::Approx(-1.0));

  // max -x s.t. x >= 2: raising the rhs lowers the objective.
  LpProblem b(Sense::kMaximize);
  const int z = b.add_variable(0.0, kInfinity, -1.0);
  b.add_constraint({{z, 1.0}}, Relation::kGreaterEqual, 2.0);
  const LpSolution sb = solve_lp(b);
  CHECK(sb.objective == doctest::Approx(-2.0));
  CHECK(sb.duals[0] == doctest::Approx(-1.0));

  // Equality rows take either sign.
  LpProblem c;
  const int u = c.add_variable(-kInfinity, kInfinity, 2.0);
  c.add_constraint({{u, 1.0}}, Relation::kEqual, -4.0);
  const LpSolution sc = solve_lp(c);
  CHECK(sc.values[u] == doctest::Approx(-4.0));
  CHECK(sc.duals[0] == doctest::Approx(2.0));
}

TEST_CASE("infeasible and unbounded are reported") {
  LpProblem inf;
  const int x = inf.add_variable(0.0, 1.0, 1.0);
  inf.add_constraint({{x, 1.0}}, Relation::kGreaterEqual, 2.0);
  CHECK(solve_lp(inf).status == LpStatus::kInfeasible);

  LpProblem unb(Sense::kMaximize);
  const int y = unb.add_variable(0.0, kInfinity, 1.0);
  const int z = unb.add_variable(0.0, kInfinity, 0.0);
  unb.add_constraint({{y, 1.0}, {z, -1.0}}, Relation::kLessEqual, 1.0);
  CHECK(solve_lp(unb).status == LpStatus::kUnbounded);

  LpProblem empty_row;
  empty_row.add_variable(0.0, 1.0, 1.0);
  empty_row.add_constraint({}, Relation::kGreaterEqual, 1.0);
  CHECK(solve_lp(empty_row).status == LpStatus::kInfeasible);
}

TEST_CASE("malformed problems are rejected") {
  LpProblem p;
  CHECK_THROWS_AS(p.add_variable(1.0, 0.0, 0.0), LpError);
  p.add_variable(0.0, 1.0, 0.0);
  CHECK_THROWS_AS(p.add_constraint({{3, 1.0}}, Relation::kEqual, 0.0), LpError);
  CHECK_THROWS_AS(p.add_constraint({{0, NAN}}, Relation::kEqual, 0.0), LpError);
}

TEST_CASE("Beale's cycling example terminates") {
  // Cycles under textbook Dantzig pricing without an anti-cycling rule.
  LpProblem p;
  const int x4 = p.add_variable(0, kInfinity, -0.75);
  const int x5 = p.add_variable(0, kInfinity, 150);
  const int x6 = p.add_variable(0, kInfinity, -0.02);
  const int x7 = p.add_variable(0, kInfinity, 6);
  p.add_constraint({{x4, 0.25}, {x5, -60}, {x6, -0.04}, {x7, 9}}, Relation::kLessEqual, 0);
  p.add_constraint({{x4, 0.5}, {x5, -90}, {x6, -0.02}, {x7, 3}}, Relation::kLessEqual, 0);
  p.add_constraint({{x6, 1}}, Relation::kLessEqual, 1);
  SimplexOptions opt;
  opt.degenerate_streak = 3;
  const LpSolution s = solve_lp(p, opt);
  REQUIRE(s.status == LpStatus::kOptimal);
  CHECK(s.objective == doctest::Approx(-0.05));
}

TEST_CASE("random LPs match vertex enumeration, duality holds, solves repeat") {
  std::mt19937 rng(2024);
  auto pick = [&](int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<unsigned>(hi - lo + 1));
  };
  int solved = 0, infeasible = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const int n = pick(1, trial < 120 ? 5 : 8);
    const int m = pick(1, trial < 120 ? 5 : 8);
    LpProblem p(pick(0, 1) ? Sense::kMaximize : Sense::kMinimize);
    for (int j = 0; j < n; ++j) {
      const int lo = pick(-3, 1);
      p.add_variable(lo, lo + pick(0, 5), pick(-5, 5));
    }
    for (int i = 0; i < m; ++i) {
      SparseTerms t;
      for (int j = 0; j < n; ++j) {
        if (pick(0, 2) > 0) t.emplace_back(j, pick(-5, 5));
      }
      const int rel = pick(0, 5);
      p.add_constraint(t, rel < 3 ? Relation::kLessEqual
                              : rel < 5 ? Relation::kGreaterEqual : Relation::kEqual,
                       pick(-8, 10));
    }
    const double expected = oracle::lp_vertex_optimum(p);
    const LpSolution s = solve_lp(p);
    if (std::isnan(expected)) {
      CHECK(s.status == LpStatus::kInfeasible);
      ++infeasible;
      continue;
    }
    REQUIRE(s.status == LpStatus::kOptimal);
    ++solved;
    CHECK(std::abs(s.objective - expected) <= 1e-6);
    CHECK(p.max_primal_violation(s.values) <= 1e-7);
    CHECK(std::abs(s.objective - s.dual_objective) <= 1e-6);
    // Weak duality direction for the problem's own sense.
    if (p.sense() == Sense::kMinimize) CHECK(s.dual_objective <= s.objective + 1e-6);
    if (p.sense() == Sense::kMaximize) CHECK(s.dual_objective >= s.objective - 1e-6);

    const LpSolution again = solve_lp(p);
    CHECK(again.values == s.values);
    CHECK(again.duals == s.duals);
    CHECK(again.pivots == s.pivots);
  }
  CHECK(solved > 40);
  CHECK(infeasible > 5);
}

TEST_CASE("binary milp examples") {
  LpProblem a;
  const int x = a.add_variable(0, 1, -1, true);
  const MilpResult ra = solve_binary_milp(a);
  REQUIRE(ra.status == MilpStatus::kOptimal);
  CHECK(ra.values[x] == 1.0);
  CHECK(ra.objective == -1.0);

  LpProblem k(Sense::kMaximize);
  const int va = k.add_variable(0, 1, 2, true);
  const int vb = k.add_variable(0, 1, 3, true);
  k.add_constraint({{va, 1}, {vb, 1}}, Relation::kLessEqual, 1);
  const MilpResult rk = solve_binary_milp(k);
  REQUIRE(rk.status == MilpStatus::kOptimal);
  CHECK(rk.values[va] == 0.0);
  CHECK(rk.values[vb] == 1.0);
  CHECK(rk.objective == 3.0);

  // The triangle master with its cycle row: min x01 + x12 - 2 x02 + 2.
  LpProblem t;
  const int x01 = t.add_variable(0, 1, 1, true);
  const int x12 = t.add_variable(0, 1, 1, true);
  const int x02 = t.add_variable(0, 1, -2, true);
  t.add_constraint({{x02, 1}, {x01, -1}, {x12, -1}}, Relation::kLessEqual, 0);
  const MilpResult rt = solve_binary_milp(t);
  REQUIRE(rt.status == MilpStatus::kOptimal);
  CHECK(rt.objective + 2.0 == doctest::Approx(1.0));
}

TEST_CASE("binary milp rejects non-binary integer variables") {
  LpProblem p;
  p.add_variable(0, 2, 1, true);
  CHECK_THROWS_AS(solve_binary_milp(p), LpError);
}

TEST_CASE("binary milp infeasible and node limit") {
  LpProblem p;
  const int a = p.add_variable(0, 1, 0, true);
  const int b = p.add_variable(0, 1, 0, true);
  p.add_constraint({{a, 1}, {b, 1}}, Relation::kEqual, 1.5);
  CHECK(solve_binary_milp(p).status == MilpStatus::kInfeasible);

  LpProblem q(Sense::kMaximize);
  SparseTerms row;
  for (int j = 0; j < 12; ++j) {
    q.add_variable(0, 1, 1, true);
    row.emplace_back(j, 2.0);
  }
  q.add_constraint(row, Relation::kLessEqual, 11.0);
  MilpOptions opt;
  opt.node_limit = 3;
  CHECK(solve_binary_milp(q, opt).status == MilpStatus::kNodeLimit);
}

TEST_CASE("random binary programs match enumeration") {
  std::mt19937 rng(77);
  auto pick = [&](int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<unsigned>(hi - lo + 1));
  };
  for (int trial = 0; trial < 80; ++trial) {
    const int n = pick(2, 9);
    const int m = pick(1, 5);
    LpProblem p(Sense::kMinimize);
    for (int j = 0; j < n; ++j) p.add_variable(0, 1, pick(-6, 6), true);
    for (int i = 0; i < m; ++i) {
      SparseTerms t;
      for (int j = 0; j < n; ++j) {
        if (pick(0, 1)) t.emplace_back(j, pick(-4, 4));
      }
      p.add_constraint(t, pick(0, 1) ? Relation::kLessEqual : Relation::kGreaterEqual,
                       pick(-3, 4));
    }
    double best = kInfinity;
    for (int mask = 0; mask < (1 << n); ++mask) {
      std::vector<double> v(n);
      for (int j = 0; j < n; ++j) v[j] = (mask >> j) & 1;
      if (p.max_primal_violation(v) <= 1e-9) best = std::min(best, p.objective_value(v));
    }
    const MilpResult r = solve_binary_milp(p);
    if (!std::isfinite(best)) {
      CHECK(r.status == MilpStatus::kInfeasible);
      continue;
    }
    REQUIRE(r.status == MilpStatus::kOptimal);
    CHECK(r.objective == doctest::Approx(best));
    CHECK(p.max_primal_violation(r.values) <= 1e-7);
    CHECK(r.objective >= r.root_bound - 1e-6);
  }
}
