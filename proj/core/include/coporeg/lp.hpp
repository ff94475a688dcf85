// coporeg - regularization of linear copositive programs
// Licensed under Apache 2.0

#pragma once

#include <limits>
#include <vector>

namespace coporeg::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Relation { LessEqual, Equal, GreaterEqual };

struct Row {
  std::vector<double> coeffs;
  Relation relation;
  double rhs;
};

/// min c'x  s.t.  rows, lower <= x <= upper.
struct LinearProgram {
  std::vector<double> objective;
  std::vector<Row> rows;
  std::vector<double> lower;
  std::vector<double> upper;

  /// `num_vars` variables, zero cost, bounds [0, +inf).
  explicit LinearProgram(int num_vars = 0);

  int num_vars() const { return static_cast<int>(objective.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }

  /// Appends a variable; existing rows get a zero coefficient.
  int add_variable(double cost, double lo = 0.0, double hi = kInf);
  int add_row(std::vector<double> coeffs, Relation rel, double rhs);
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

const char* to_string(LpStatus s);

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> primal;
  /// One multiplier per row. Sign convention for a min problem: >= rows
  /// carry nonnegative, <= rows nonpositive, = rows free multipliers.
  std::vector<double> dual;
  /// c_j - sum_i dual_i a_ij.
  std::vector<double> reduced_costs;
  double objective_value = 0.0;
  double dual_objective = 0.0;
  /// Recession direction (inf-norm 1) when Unbounded.
  std::vector<double> ray;
  /// Basic columns of the internal standard form, in row order.
  std::vector<int> basis;
  int iterations = 0;
};

struct LpOptions {
  double tol = 1e-9;        ///< reduced-cost and feasibility threshold
  double pivot_tol = 1e-9;  ///< smallest admissible pivot magnitude
  int degenerate_limit = 50;  ///< consecutive degenerate pivots before Bland's rule
  int refactor_every = 64;
  int max_iterations = 0;   ///< 0 = automatic
};

/// Two-phase dense primal simplex. Dantzig pricing with lowest-index ties;
/// switches to Bland's rule once a run of degenerate pivots suggests cycling.
/// Primal and dual values are recomputed from a fresh factorization of the
/// final basis. Throws SolverError if the basis becomes singular or the
/// iteration limit is hit.
LpSolution solve_lp(const LinearProgram& lp, const LpOptions& opts = {});

/// min c'z over free z subject to `rows`, solved through the dual program,
/// which has one row per variable; suited to cutting-plane masters with a
/// handful of variables and many rows. The result carries z in `primal` and
/// the row multipliers in `dual` (same sign convention as solve_lp). A basic
/// dual solution has at most dim(z) nonzero multipliers.
LpSolution solve_lp_by_dual(const std::vector<double>& c, const std::vector<Row>& rows,
                            const LpOptions& opts = {});

}  // namespace coporeg::lp
