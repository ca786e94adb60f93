#include "ccbend/lp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <queue>

namespace ccbend {

int LpProblem::add_variable(double lower, double upper, double objective,
                            bool integer) {
  if (std::isnan(lower) || std::isnan(upper) || lower > upper ||
      lower == kInfinity || upper == -kInfinity) {
    throw LpError("invalid variable bounds");
  }
  if (!std::isfinite(objective)) throw LpError("non-finite objective coefficient");
  lower_.push_back(lower);
  upper_.push_back(upper);
  objective_.push_back(objective);
  integer_.push_back(integer);
  return variable_count() - 1;
}

int LpProblem::add_constraint(SparseTerms terms, Relation relation, double rhs) {
  if (!std::isfinite(rhs)) throw LpError("non-finite right-hand side");
  for (const auto& [var, coef] : terms) {
    if (var < 0 || var >= variable_count()) {
      throw LpError("constraint references undeclared variable " +
                    std::to_string(var));
    }
    if (!std::isfinite(coef)) throw LpError("non-finite constraint coefficient");
  }
  rows_.push_back(LpRow{std::move(terms), relation, rhs});
  return constraint_count() - 1;
}

void LpProblem::set_objective(int var, double coefficient) {
  if (!std::isfinite(coefficient)) throw LpError("non-finite objective coefficient");
  objective_.at(var) = coefficient;
}

void LpProblem::set_bounds(int var, double lower, double upper) {
  if (lower > upper || lower == kInfinity || upper == -kInfinity) {
    throw LpError("invalid variable bounds");
  }
  lower_.at(var) = lower;
  upper_.at(var) = upper;
}

double LpProblem::row_activity(int i, const std::vector<double>& values) const {
  double s = 0.0;
  for (const auto& [var, coef] : rows_[i].terms) s += coef * values[var];
  return s;
}

double LpProblem::objective_value(const std::vector<double>& values) const {
  double s = 0.0;
  for (int j = 0; j < variable_count(); ++j) s += objective_[j] * values[j];
  return s;
}

double LpProblem::max_primal_violation(const std::vector<double>& values) const {
  double worst = 0.0;
  for (int j = 0; j < variable_count(); ++j) {
    worst = std::max({worst, lower_[j] - values[j], values[j] - upper_[j]});
  }
  for (int i = 0; i < constraint_count(); ++i) {
    const double a = row_activity(i, values);
    const double b = rows_[i].rhs;
    switch (rows_[i].relation) {
      case Relation::kLessEqual: worst = std::max(worst, a - b); break;
      case Relation::kGreaterEqual: worst = std::max(worst, b - a); break;
      case Relation::kEqual: worst = std::max(worst, std::abs(a - b)); break;
    }
  }
  return worst;
}

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
  }
  return "?";
}

const char* to_string(MilpStatus status) {
  switch (status) {
    case MilpStatus::kOptimal: return "optimal";
    case MilpStatus::kInfeasible: return "infeasible";
    case MilpStatus::kUnbounded: return "unbounded";
    case MilpStatus::kNodeLimit: return "node-limit";
  }
  return "?";
}

namespace {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class ColState { kBasic, kAtLower, kAtUpper, kFree };

// Internal form: minimize c.z subject to [A I Art] z = b, lo <= z <= up, where
// the identity block holds one slack per kept row (>= rows get slacks in
// (-inf, 0], <= rows in [0, inf), = rows are fixed at 0).
class Simplex {
 public:
  Simplex(const LpProblem& p, const SimplexOptions& o) : p_(p), opt_(o) {}

  LpSolution run() {
    LpSolution sol;
    if (!build()) {
      sol.status = LpStatus::kInfeasible;
      return sol;
    }
    if (art_count_ > 0) {
      std::vector<double> phase1(cols_, 0.0);
      for (int k = 0; k < art_count_; ++k) phase1[n_ + m_ + k] = 1.0;
      set_cost(phase1);
      if (!optimize()) throw LpError("phase one reported unbounded");
      double infeasibility = 0.0;
      for (int k = 0; k < art_count_; ++k) infeasibility += x_[n_ + m_ + k];
      if (infeasibility > 1e-7) {
        sol.status = LpStatus::kInfeasible;
        sol.pivots = pivots_;
        return sol;
      }
      for (int k = 0; k < art_count_; ++k) {
        const int j = n_ + m_ + k;
        lo_[j] = up_[j] = 0.0;
        if (state_[j] != ColState::kBasic) {
          state_[j] = ColState::kAtLower;
          x_[j] = 0.0;
        }
      }
    }
    std::vector<double> phase2(cols_, 0.0);
    const double sign = p_.sense() == Sense::kMaximize ? -1.0 : 1.0;
    for (int j = 0; j < n_; ++j) phase2[j] = sign * p_.objective(j);
    set_cost(phase2);
    const bool bounded = optimize();
    sol.pivots = pivots_;
    sol.values.assign(x_.begin(), x_.begin() + n_);
    sol.objective = p_.objective_value(sol.values);
    if (!bounded) {
      sol.status = LpStatus::kUnbounded;
      return sol;
    }
    sol.status = LpStatus::kOptimal;
    extract_duals(sign, sol);
    return sol;
  }

 private:
  bool build() {
    n_ = p_.variable_count();
    for (int i = 0; i < p_.constraint_count(); ++i) {
      const LpRow& row = p_.row(i);
      bool empty = true;
      for (const auto& t : row.terms) empty = empty && t.second == 0.0;
      if (empty) {
        const double b = row.rhs;
        const double tol = opt_.feasibility_tol;
        const bool ok = (row.relation == Relation::kLessEqual && b >= -tol) ||
                        (row.relation == Relation::kGreaterEqual && b <= tol) ||
                        (row.relation == Relation::kEqual && std::abs(b) <= tol);
        if (!ok) return false;
        continue;
      }
      row_map_.push_back(i);
    }
    m_ = static_cast<int>(row_map_.size());

    lo_.assign(n_ + m_, 0.0);
    up_.assign(n_ + m_, 0.0);
    x_.assign(n_ + m_, 0.0);
    state_.assign(n_ + m_, ColState::kAtLower);
    for (int j = 0; j < n_; ++j) {
      lo_[j] = p_.lower(j);
      up_[j] = p_.upper(j);
      if (std::isfinite(lo_[j])) {
        x_[j] = lo_[j];
        state_[j] = ColState::kAtLower;
      } else if (std::isfinite(up_[j])) {
        x_[j] = up_[j];
        state_[j] = ColState::kAtUpper;
      } else {
        x_[j] = 0.0;
        state_[j] = ColState::kFree;
      }
    }

    b_.resize(m_);
    std::vector<double> residual(m_);
    std::vector<int> art_rows;
    std::vector<double> art_sign;
    for (int r = 0; r < m_; ++r) {
      const LpRow& row = p_.row(row_map_[r]);
      b_(r) = row.rhs;
      double activity = 0.0;
      for (const auto& [var, coef] : row.terms) activity += coef * x_[var];
      const double res = row.rhs - activity;
      residual[r] = res;
      const int s = n_ + r;
      switch (row.relation) {
        case Relation::kLessEqual: lo_[s] = 0.0; up_[s] = kInfinity; break;
        case Relation::kGreaterEqual: lo_[s] = -kInfinity; up_[s] = 0.0; break;
        case Relation::kEqual: lo_[s] = 0.0; up_[s] = 0.0; break;
      }
      if (res >= lo_[s] - opt_.feasibility_tol && res <= up_[s] + opt_.feasibility_tol) {
        continue;
      }
      // Slack parks at its violated bound, an artificial absorbs the rest.
      const double park = res < lo_[s] ? lo_[s] : up_[s];
      x_[s] = park;
      state_[s] = park == lo_[s] ? ColState::kAtLower : ColState::kAtUpper;
      art_rows.push_back(r);
      art_sign.push_back(res - park > 0.0 ? 1.0 : -1.0);
    }
    art_count_ = static_cast<int>(art_rows.size());
    cols_ = n_ + m_ + art_count_;
    lo_.resize(cols_, 0.0);
    up_.resize(cols_, kInfinity);
    x_.resize(cols_, 0.0);
    state_.resize(cols_, ColState::kBasic);

    original_ = Matrix::Zero(m_, cols_);
    for (int r = 0; r < m_; ++r) {
      for (const auto& [var, coef] : p_.row(row_map_[r]).terms) {
        original_(r, var) += coef;
      }
      original_(r, n_ + r) = 1.0;
    }
    basis_.resize(m_);
    for (int r = 0; r < m_; ++r) basis_[r] = n_ + r;
    for (int k = 0; k < art_count_; ++k) {
      const int r = art_rows[k];
      original_(r, n_ + m_ + k) = art_sign[k];
      basis_[r] = n_ + m_ + k;
    }
    tab_ = original_;
    for (int k = 0; k < art_count_; ++k) tab_.row(art_rows[k]) *= art_sign[k];
    for (int r = 0; r < m_; ++r) {
      const int j = basis_[r];
      state_[j] = ColState::kBasic;
      x_[j] = j >= n_ + m_ ? std::abs(residual[r] - x_[n_ + r]) : residual[r];
    }
    refactor_every_ = std::max(opt_.refactor_interval, m_);
    return true;
  }

  void set_cost(std::vector<double> cost) {
    cost_ = std::move(cost);
    reduced_.resize(cols_);
    for (int j = 0; j < cols_; ++j) reduced_(j) = cost_[j];
    for (int r = 0; r < m_; ++r) {
      const double cb = cost_[basis_[r]];
      if (cb != 0.0) reduced_ -= cb * tab_.row(r);
    }
  }

  // Rebuilds the tableau, basic values and reduced costs from the original
  // data for the current basis.
  void refactor() {
    since_refactor_ = 0;
    if (m_ == 0) return;
    Eigen::MatrixXd basis_matrix(m_, m_);
    for (int r = 0; r < m_; ++r) basis_matrix.col(r) = original_.col(basis_[r]);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis_matrix);
    if (!(lu.rcond() > 1e-13)) throw LpError("numerically singular basis");
    tab_ = lu.solve(Eigen::MatrixXd(original_));
    Eigen::VectorXd rhs = b_;
    for (int j = 0; j < cols_; ++j) {
      if (state_[j] != ColState::kBasic && x_[j] != 0.0) rhs -= x_[j] * original_.col(j);
    }
    const Eigen::VectorXd xb = lu.solve(rhs);
    for (int r = 0; r < m_; ++r) x_[basis_[r]] = xb(r);
    set_cost(cost_);
  }

  int choose_entering() const {
    int best = -1;
    double best_score = 0.0;
    const double tol = opt_.optimality_tol;
    for (int j = 0; j < cols_; ++j) {
      const ColState s = state_[j];
      if (s == ColState::kBasic || lo_[j] == up_[j]) continue;
      const double d = reduced_(j);
      const bool up_ok = (s == ColState::kAtLower || s == ColState::kFree) && d < -tol;
      const bool down_ok = (s == ColState::kAtUpper || s == ColState::kFree) && d > tol;
      if (!up_ok && !down_ok) continue;
      if (bland_) return j;
      if (std::abs(d) > best_score) {
        best_score = std::abs(d);
        best = j;
      }
    }
    return best;
  }

  // Returns false when the objective is unbounded below.
  bool optimize() {
    since_refactor_ = 0;
    bland_ = false;
    degenerate_run_ = 0;
    while (true) {
      if (pivots_ >= opt_.max_pivots) throw LpError("simplex pivot limit exceeded");
      if (since_refactor_ >= refactor_every_) refactor();
      int q = choose_entering();
      if (q < 0) {
        if (since_refactor_ == 0) return true;
        refactor();
        q = choose_entering();
        if (q < 0) return true;
      }
      if (!step(q)) return false;
    }
  }

  bool step(int q) {
    const double dir = reduced_(q) < 0.0 ? 1.0 : -1.0;
    const double ptol = opt_.pivot_tol;
    const double ftol = opt_.feasibility_tol;
    alpha_.resize(m_);
    for (int r = 0; r < m_; ++r) alpha_[r] = tab_(r, q);

    // Room before basic variable r hits the bound it moves toward.
    auto room = [&](int r, double rate) {
      const int k = basis_[r];
      return rate < 0.0 ? x_[k] - lo_[k] : up_[k] - x_[k];
    };
    auto bounded = [&](int r, double rate) {
      const int k = basis_[r];
      return rate < 0.0 ? std::isfinite(lo_[k]) : std::isfinite(up_[k]);
    };

    int leave = -1;
    double step_len = kInfinity;
    if (bland_) {
      for (int r = 0; r < m_; ++r) {
        if (std::abs(alpha_[r]) <= ptol) continue;
        const double rate = -dir * alpha_[r];
        if (!bounded(r, rate)) continue;
        const double ratio = std::max(0.0, room(r, rate)) / std::abs(rate);
        if (ratio < step_len - 1e-12 ||
            (ratio <= step_len + 1e-12 && leave >= 0 && basis_[r] < basis_[leave])) {
          step_len = std::min(step_len, ratio);
          leave = r;
        }
      }
    } else {
      // Harris two-pass ratio test.
      double relaxed = kInfinity;
      for (int r = 0; r < m_; ++r) {
        if (std::abs(alpha_[r]) <= ptol) continue;
        const double rate = -dir * alpha_[r];
        if (!bounded(r, rate)) continue;
        relaxed = std::min(relaxed, (room(r, rate) + ftol) / std::abs(rate));
      }
      double best_pivot = 0.0;
      for (int r = 0; r < m_; ++r) {
        if (std::abs(alpha_[r]) <= ptol) continue;
        const double rate = -dir * alpha_[r];
        if (!bounded(r, rate)) continue;
        const double ratio = std::max(0.0, room(r, rate)) / std::abs(rate);
        if (ratio <= relaxed && std::abs(alpha_[r]) > best_pivot) {
          best_pivot = std::abs(alpha_[r]);
          leave = r;
          step_len = ratio;
        }
      }
    }

    const double span = up_[q] - lo_[q];
    const bool flip = std::isfinite(span) && (leave < 0 || span <= step_len);
    if (!flip && leave < 0) return false;
    if (flip) step_len = span;

    ++pivots_;
    ++since_refactor_;
    if (step_len <= 1e-12) {
      if (++degenerate_run_ >= opt_.degenerate_streak) bland_ = true;
    } else {
      degenerate_run_ = 0;
      bland_ = false;
    }

    for (int r = 0; r < m_; ++r) {
      if (alpha_[r] != 0.0) x_[basis_[r]] -= dir * step_len * alpha_[r];
    }
    if (flip) {
      if (dir > 0) {
        x_[q] = up_[q];
        state_[q] = ColState::kAtUpper;
      } else {
        x_[q] = lo_[q];
        state_[q] = ColState::kAtLower;
      }
      return true;
    }

    x_[q] += dir * step_len;
    const int k = basis_[leave];
    const double rate = -dir * alpha_[leave];
    if (rate < 0.0) {
      x_[k] = lo_[k];
      state_[k] = ColState::kAtLower;
    } else {
      x_[k] = up_[k];
      state_[k] = ColState::kAtUpper;
    }
    basis_[leave] = q;
    state_[q] = ColState::kBasic;

    const double piv = alpha_[leave];
    tab_.row(leave) /= piv;
    for (int r = 0; r < m_; ++r) {
      if (r == leave || alpha_[r] == 0.0) continue;
      tab_.row(r) -= alpha_[r] * tab_.row(leave);
    }
    const double dq = reduced_(q);
    reduced_ -= dq * tab_.row(leave);
    reduced_(q) = 0.0;
    return true;
  }

  void extract_duals(double sign, LpSolution& sol) const {
    const int rows = p_.constraint_count();
    std::vector<double> y(rows, 0.0);
    for (int r = 0; r < m_; ++r) y[row_map_[r]] = -reduced_(n_ + r);

    // Dual objective from the original data: b.y plus bound terms of every
    // structural and slack column.
    std::vector<double> rc(n_);
    for (int j = 0; j < n_; ++j) rc[j] = sign * p_.objective(j);
    double dual = 0.0;
    for (int i = 0; i < rows; ++i) {
      const LpRow& row = p_.row(i);
      dual += y[i] * row.rhs;
      for (const auto& [var, coef] : row.terms) rc[var] -= y[i] * coef;
    }
    auto bound_term = [](double r, double lo, double up) {
      const double tol = 1e-7;
      if (r > 0.0) {
        if (std::isfinite(lo)) return r * lo;
        return r <= tol ? 0.0 : -kInfinity;
      }
      if (r < 0.0) {
        if (std::isfinite(up)) return r * up;
        return -r <= tol ? 0.0 : -kInfinity;
      }
      return 0.0;
    };
    for (int j = 0; j < n_; ++j) dual += bound_term(rc[j], p_.lower(j), p_.upper(j));
    for (int i = 0; i < rows; ++i) {
      const double r = -y[i];
      switch (p_.row(i).relation) {
        case Relation::kLessEqual: dual += bound_term(r, 0.0, kInfinity); break;
        case Relation::kGreaterEqual: dual += bound_term(r, -kInfinity, 0.0); break;
        case Relation::kEqual: break;
      }
    }

    sol.duals.resize(rows);
    for (int i = 0; i < rows; ++i) sol.duals[i] = sign * y[i];
    sol.reduced_costs.resize(n_);
    for (int j = 0; j < n_; ++j) sol.reduced_costs[j] = sign * rc[j];
    sol.dual_objective = sign * dual;
  }

  const LpProblem& p_;
  SimplexOptions opt_;
  int n_ = 0;
  int m_ = 0;
  int art_count_ = 0;
  int cols_ = 0;
  std::vector<int> row_map_;
  Matrix original_;
  Matrix tab_;
  Eigen::VectorXd b_;
  Eigen::RowVectorXd reduced_;
  std::vector<double> cost_;
  std::vector<double> lo_, up_, x_;
  std::vector<ColState> state_;
  std::vector<int> basis_;
  std::vector<double> alpha_;
  std::int64_t pivots_ = 0;
  int since_refactor_ = 0;
  int refactor_every_ = 100;
  bool bland_ = false;
  int degenerate_run_ = 0;
};

}  // namespace

LpSolution solve_lp(const LpProblem& problem, const SimplexOptions& options) {
  return Simplex(problem, options).run();
}

namespace {

struct Node {
  double bound = 0.0;
  std::int64_t order = 0;
  std::vector<std::pair<int, double>> fixings;
};

struct NodeAfter {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.order > b.order;
  }
};

}  // namespace

MilpResult solve_binary_milp(const LpProblem& problem, const MilpOptions& options) {
  for (int j = 0; j < problem.variable_count(); ++j) {
    if (problem.is_integer(j) && (problem.lower(j) < 0.0 || problem.upper(j) > 1.0)) {
      throw LpError("integer variable " + std::to_string(j) +
                    " has bounds outside [0, 1]");
    }
  }
  const double sign = problem.sense() == Sense::kMaximize ? -1.0 : 1.0;
  const double prune_tol = 1e-9;

  MilpResult result;
  double incumbent = kInfinity;  // in minimization form
  LpProblem work = problem;
  std::priority_queue<Node, std::vector<Node>, NodeAfter> open;
  std::int64_t created = 0;
  open.push(Node{-kInfinity, created++, {}});
  bool root = true;

  while (!open.empty()) {
    Node node = open.top();
    open.pop();
    if (node.bound >= incumbent - prune_tol) continue;
    if (result.nodes >= options.node_limit) {
      result.status = MilpStatus::kNodeLimit;
      return result;
    }
    ++result.nodes;
    for (int j = 0; j < problem.variable_count(); ++j) {
      work.set_bounds(j, problem.lower(j), problem.upper(j));
    }
    for (const auto& [var, value] : node.fixings) work.set_bounds(var, value, value);

    const LpSolution lp = solve_lp(work, options.lp);
    result.pivots += lp.pivots;
    if (lp.status == LpStatus::kUnbounded) {
      result.status = MilpStatus::kUnbounded;
      return result;
    }
    if (lp.status == LpStatus::kInfeasible) {
      root = false;
      continue;
    }
    const double bound = sign * lp.objective;
    if (root) {
      result.root_bound = lp.objective;
      root = false;
    }
    if (bound >= incumbent - prune_tol) continue;

    int branch = -1;
    double best_frac = options.integrality_tol;
    for (int j = 0; j < problem.variable_count(); ++j) {
      if (!problem.is_integer(j)) continue;
      const double v = lp.values[j];
      const double frac = std::min(v - std::floor(v), std::ceil(v) - v);
      if (frac > best_frac + 1e-12) {
        best_frac = frac;
        branch = j;
      }
    }
    if (branch < 0) {
      incumbent = bound;
      result.values = lp.values;
      for (int j = 0; j < problem.variable_count(); ++j) {
        if (problem.is_integer(j)) result.values[j] = std::round(result.values[j]);
      }
      result.objective = problem.objective_value(result.values);
      result.has_incumbent = true;
      continue;
    }
    for (double value : {0.0, 1.0}) {
      Node child{bound, created++, node.fixings};
      child.fixings.emplace_back(branch, value);
      open.push(std::move(child));
    }
  }
  result.status = result.has_incumbent ? MilpStatus::kOptimal : MilpStatus::kInfeasible;
  return result;
}

}  // namespace ccbend
