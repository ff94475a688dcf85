// coporeg - regularization of linear copositive programs
// Licensed under Apache 2.0

#include "coporeg/lp.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

#include "coporeg/errors.hpp"

namespace coporeg::lp {

LinearProgram::LinearProgram(int num_vars)
    : objective(static_cast<std::size_t>(num_vars), 0.0),
      lower(static_cast<std::size_t>(num_vars), 0.0),
      upper(static_cast<std::size_t>(num_vars), kInf) {}

int LinearProgram::add_variable(double cost, double lo, double hi) {
  objective.push_back(cost);
  lower.push_back(lo);
  upper.push_back(hi);
  for (auto& r : rows) r.coeffs.push_back(0.0);
  return num_vars() - 1;
}

int LinearProgram::add_row(std::vector<double> coeffs, Relation rel, double rhs) {
  if (static_cast<int>(coeffs.size()) != num_vars()) {
    throw InputError("LP row has " + std::to_string(coeffs.size()) + " coefficients, expected " +
                     std::to_string(num_vars()));
  }
  rows.push_back({std::move(coeffs), rel, rhs});
  return num_rows() - 1;
}

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
  }
  return "?";
}

namespace {

// How an original variable lives in the standard form y >= 0.
enum class Kind { Shift, Reflect, Split };
struct VarMap {
  Kind kind;
  int col;
  int col2;
  double offset;
};

struct StdRow {
  Eigen::VectorXd a;  // structural part
  Relation rel;
  double rhs;
  int user;     // user row index, or -1 for a bound row
  double sign;  // +1, or -1 when the row was negated
};

class Simplex {
 public:
  Simplex(Eigen::MatrixXd a, Eigen::VectorXd b, std::vector<int> basis, const LpOptions& opts)
      : a_(std::move(a)), b_(std::move(b)), basis_(std::move(basis)), opts_(opts) {
    const auto m = a_.rows();
    t_.resize(m, a_.cols() + 1);
    t_.leftCols(a_.cols()) = a_;
    t_.col(a_.cols()) = b_;
    origin_.resize(static_cast<std::size_t>(m));
    for (Eigen::Index r = 0; r < m; ++r) origin_[static_cast<std::size_t>(r)] = static_cast<int>(r);
    max_iter_ = opts.max_iterations > 0 ? opts.max_iterations
                                        : 200 * static_cast<int>(m + a_.cols()) + 1000;
  }

  Eigen::Index rows() const { return t_.rows(); }
  Eigen::Index cols() const { return a_.cols(); }
  const std::vector<int>& basis() const { return basis_; }
  const std::vector<int>& origin() const { return origin_; }
  int iterations() const { return iterations_; }
  double rhs(Eigen::Index r) const { return t_(r, cols()); }
  double entry(Eigen::Index r, Eigen::Index j) const { return t_(r, j); }

  // Returns -1 on optimality, otherwise the entering column of an unbounded
  // direction. Columns >= `allowed` never enter.
  int optimize(const Eigen::VectorXd& cost, Eigen::Index allowed) {
    bool bland = false;
    int degenerate = 0;
    int since_refactor = 0;
    for (;;) {
      if (iterations_ >= max_iter_) throw SolverError("LP iteration limit reached");
      const Eigen::VectorXd d = reduced(cost);
      int s = -1;
      double best = -opts_.tol;
      for (Eigen::Index j = 0; j < allowed; ++j) {
        if (d(j) < best) {
          s = static_cast<int>(j);
          if (bland) break;
          best = d(j);
        }
      }
      if (s < 0) return -1;

      Eigen::Index r = -1;
      double ratio = 0.0;
      const auto rc = cols();
      for (Eigen::Index i = 0; i < rows(); ++i) {
        const double v = t_(i, s);
        if (v <= opts_.pivot_tol) continue;
        const double q = std::max(t_(i, rc), 0.0) / v;
        if (r < 0 || q < ratio - 1e-12) {
          r = i;
          ratio = q;
        } else if (q <= ratio + 1e-12 && basis_[static_cast<std::size_t>(i)] <
                                             basis_[static_cast<std::size_t>(r)]) {
          r = i;
        }
      }
      if (r < 0) return s;

      if (ratio <= opts_.tol) {
        if (++degenerate > opts_.degenerate_limit) bland = true;
      } else {
        degenerate = 0;
      }
      pivot(r, s);
      ++iterations_;
      if (++since_refactor >= opts_.refactor_every) {
        refactor();
        since_refactor = 0;
      }
    }
  }

  Eigen::VectorXd reduced(const Eigen::VectorXd& cost) const {
    Eigen::VectorXd cb(rows());
    for (Eigen::Index r = 0; r < rows(); ++r) cb(r) = cost(basis_[static_cast<std::size_t>(r)]);
    return cost - t_.leftCols(cols()).transpose() * cb;
  }

  double value(const Eigen::VectorXd& cost) const {
    double v = 0.0;
    for (Eigen::Index r = 0; r < rows(); ++r) v += cost(basis_[static_cast<std::size_t>(r)]) * rhs(r);
    return v;
  }

  void pivot(Eigen::Index r, Eigen::Index s) {
    const double piv = t_(r, s);
    t_.row(r) /= piv;
    Eigen::VectorXd col = t_.col(s);
    col(r) = 0.0;
    const Eigen::RowVectorXd pr = t_.row(r);
    t_.noalias() -= col * pr;
    t_.col(s).setZero();
    t_(r, s) = 1.0;
    basis_[static_cast<std::size_t>(r)] = static_cast<int>(s);
  }

  Eigen::MatrixXd basis_matrix() const {
    Eigen::MatrixXd bm(rows(), rows());
    for (Eigen::Index r = 0; r < rows(); ++r) bm.col(r) = a_.col(basis_[static_cast<std::size_t>(r)]);
    return bm;
  }

  // Rebuilds the tableau from the original data and the current basis.
  void refactor() {
    if (rows() == 0) return;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(basis_matrix());
    if (!lu.isInvertible()) {
      throw SolverError("singular basis after refactorization (rank " + std::to_string(lu.rank()) +
                        " of " + std::to_string(rows()) + ")");
    }
    Eigen::MatrixXd aug(rows(), cols() + 1);
    aug.leftCols(cols()) = a_;
    aug.col(cols()) = b_;
    t_ = lu.solve(aug);
    for (Eigen::Index r = 0; r < rows(); ++r) {
      t_.col(basis_[static_cast<std::size_t>(r)]).setZero();
      t_(r, basis_[static_cast<std::size_t>(r)]) = 1.0;
    }
  }

  // Pivots basic artificials (columns >= first_art) out, dropping rows that
  // turn out to be linearly dependent.
  void drive_out(Eigen::Index first_art) {
    for (Eigen::Index r = 0; r < rows();) {
      if (basis_[static_cast<std::size_t>(r)] < first_art) {
        ++r;
        continue;
      }
      Eigen::Index best = -1;
      double mag = 1e-7;
      for (Eigen::Index j = 0; j < first_art; ++j) {
        if (std::abs(t_(r, j)) > mag) {
          mag = std::abs(t_(r, j));
          best = j;
        }
      }
      if (best >= 0) {
        pivot(r, best);
        ++r;
      } else {
        remove_row(r);
      }
    }
  }

  Eigen::VectorXd duals(const Eigen::VectorXd& cost) const {
    if (rows() == 0) return {};
    Eigen::VectorXd cb(rows());
    for (Eigen::Index r = 0; r < rows(); ++r) cb(r) = cost(basis_[static_cast<std::size_t>(r)]);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(basis_matrix().transpose());
    return lu.solve(cb);
  }

 private:
  void remove_row(Eigen::Index r) {
    const auto m = rows();
    auto drop = [&](auto& mat) {
      mat.middleRows(r, m - r - 1) = mat.bottomRows(m - r - 1).eval();
      mat.conservativeResize(m - 1, Eigen::NoChange);
    };
    drop(t_);
    drop(a_);
    b_.segment(r, m - r - 1) = b_.tail(m - r - 1).eval();
    b_.conservativeResize(m - 1);
    basis_.erase(basis_.begin() + r);
    origin_.erase(origin_.begin() + r);
  }

  Eigen::MatrixXd a_;
  Eigen::VectorXd b_;
  Eigen::MatrixXd t_;
  std::vector<int> basis_;
  std::vector<int> origin_;
  LpOptions opts_;
  int iterations_ = 0;
  int max_iter_ = 0;
};

void validate(const LinearProgram& lp) {
  const auto n = static_cast<std::size_t>(lp.num_vars());
  if (lp.lower.size() != n || lp.upper.size() != n) {
    throw InputError("LP bounds do not match the variable count");
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!(lp.lower[j] <= lp.upper[j]) || lp.lower[j] == kInf || lp.upper[j] == -kInf) {
      throw InputError("LP variable " + std::to_string(j) + " has empty bounds");
    }
    if (!std::isfinite(lp.objective[j])) throw InputError("LP objective is not finite");
  }
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    if (lp.rows[i].coeffs.size() != n) {
      throw InputError("LP row " + std::to_string(i) + " has the wrong length");
    }
    if (!std::isfinite(lp.rows[i].rhs)) {
      throw InputError("LP row " + std::to_string(i) + " has a non-finite rhs");
    }
  }
}

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const LpOptions& opts) {
  validate(lp);
  const int n = lp.num_vars();

  std::vector<VarMap> vars(static_cast<std::size_t>(n));
  int ns = 0;
  for (int j = 0; j < n; ++j) {
    const double lo = lp.lower[static_cast<std::size_t>(j)];
    const double hi = lp.upper[static_cast<std::size_t>(j)];
    auto& v = vars[static_cast<std::size_t>(j)];
    if (std::isfinite(lo)) {
      v = {Kind::Shift, ns++, -1, lo};
    } else if (std::isfinite(hi)) {
      v = {Kind::Reflect, ns++, -1, hi};
    } else {
      v = {Kind::Split, ns, ns + 1, 0.0};
      ns += 2;
    }
  }

  Eigen::VectorXd cost_s = Eigen::VectorXd::Zero(ns);
  for (int j = 0; j < n; ++j) {
    const auto& v = vars[static_cast<std::size_t>(j)];
    const double c = lp.objective[static_cast<std::size_t>(j)];
    switch (v.kind) {
      case Kind::Shift: cost_s(v.col) = c; break;
      case Kind::Reflect: cost_s(v.col) = -c; break;
      case Kind::Split: cost_s(v.col) = c; cost_s(v.col2) = -c; break;
    }
  }

  std::vector<StdRow> srows;
  for (int i = 0; i < lp.num_rows(); ++i) {
    const auto& row = lp.rows[static_cast<std::size_t>(i)];
    StdRow s{Eigen::VectorXd::Zero(ns), row.relation, row.rhs, i, 1.0};
    for (int j = 0; j < n; ++j) {
      const double aij = row.coeffs[static_cast<std::size_t>(j)];
      if (aij == 0.0) continue;
      const auto& v = vars[static_cast<std::size_t>(j)];
      switch (v.kind) {
        case Kind::Shift: s.a(v.col) += aij; s.rhs -= aij * v.offset; break;
        case Kind::Reflect: s.a(v.col) -= aij; s.rhs -= aij * v.offset; break;
        case Kind::Split: s.a(v.col) += aij; s.a(v.col2) -= aij; break;
      }
    }
    srows.push_back(std::move(s));
  }
  for (int j = 0; j < n; ++j) {
    const auto& v = vars[static_cast<std::size_t>(j)];
    const double lo = lp.lower[static_cast<std::size_t>(j)];
    const double hi = lp.upper[static_cast<std::size_t>(j)];
    if (v.kind == Kind::Shift && std::isfinite(hi)) {
      StdRow s{Eigen::VectorXd::Zero(ns), Relation::LessEqual, hi - lo, -1, 1.0};
      s.a(v.col) = 1.0;
      srows.push_back(std::move(s));
    }
  }

  // Make every rhs nonnegative; homogeneous >= rows become <= rows so that
  // their slack can start in the basis.
  for (auto& s : srows) {
    const bool flip = s.rhs < 0.0 || (s.rhs == 0.0 && s.rel == Relation::GreaterEqual);
    if (!flip) continue;
    s.a = -s.a;
    s.rhs = -s.rhs;
    s.sign = -1.0;
    if (s.rel == Relation::LessEqual) {
      s.rel = Relation::GreaterEqual;
    } else if (s.rel == Relation::GreaterEqual) {
      s.rel = Relation::LessEqual;
    }
  }

  const auto m = static_cast<Eigen::Index>(srows.size());
  int n_slack = 0;
  int n_art = 0;
  for (const auto& s : srows) {
    if (s.rel != Relation::Equal) ++n_slack;
    if (s.rel != Relation::LessEqual) ++n_art;
  }
  const Eigen::Index first_slack = ns;
  const Eigen::Index first_art = ns + n_slack;
  const Eigen::Index ncols = first_art + n_art;

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, ncols);
  Eigen::VectorXd b(m);
  std::vector<int> basis(static_cast<std::size_t>(m));
  {
    Eigen::Index sl = first_slack;
    Eigen::Index ar = first_art;
    for (Eigen::Index r = 0; r < m; ++r) {
      const auto& s = srows[static_cast<std::size_t>(r)];
      a.row(r).head(ns) = s.a.transpose();
      b(r) = s.rhs;
      if (s.rel == Relation::LessEqual) {
        a(r, sl) = 1.0;
        basis[static_cast<std::size_t>(r)] = static_cast<int>(sl++);
      } else {
        if (s.rel == Relation::GreaterEqual) a(r, sl++) = -1.0;
        a(r, ar) = 1.0;
        basis[static_cast<std::size_t>(r)] = static_cast<int>(ar++);
      }
    }
  }

  Simplex sx(a, b, basis, opts);
  LpSolution sol;
  const double bscale = 1.0 + (m > 0 ? b.cwiseAbs().maxCoeff() : 0.0);

  if (n_art > 0) {
    Eigen::VectorXd c1 = Eigen::VectorXd::Zero(ncols);
    c1.tail(n_art).setOnes();
    sx.optimize(c1, ncols);
    sx.refactor();
    if (sx.value(c1) > opts.tol * bscale * 10.0) {
      sol.status = LpStatus::Infeasible;
      sol.iterations = sx.iterations();
      sol.basis = sx.basis();
      return sol;
    }
    sx.drive_out(first_art);
    sx.refactor();
  }

  Eigen::VectorXd c2 = Eigen::VectorXd::Zero(ncols);
  c2.head(ns) = cost_s;
  int entering = -1;
  for (int pass = 0; pass < 4; ++pass) {
    entering = sx.optimize(c2, first_art);
    if (entering >= 0) break;
    sx.refactor();
    const Eigen::VectorXd d = sx.reduced(c2);
    if (first_art == 0 || d.head(first_art).minCoeff() >= -opts.tol) break;
  }

  sol.iterations = sx.iterations();
  sol.basis = sx.basis();

  auto to_original = [&](const Eigen::VectorXd& y, bool homogeneous) {
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      const auto& v = vars[static_cast<std::size_t>(j)];
      const double off = homogeneous ? 0.0 : v.offset;
      switch (v.kind) {
        case Kind::Shift: x[static_cast<std::size_t>(j)] = off + y(v.col); break;
        case Kind::Reflect: x[static_cast<std::size_t>(j)] = off - y(v.col); break;
        case Kind::Split: x[static_cast<std::size_t>(j)] = y(v.col) - y(v.col2); break;
      }
    }
    return x;
  };

  Eigen::VectorXd y = Eigen::VectorXd::Zero(ncols);
  for (Eigen::Index r = 0; r < sx.rows(); ++r) {
    y(sx.basis()[static_cast<std::size_t>(r)]) = std::max(sx.rhs(r), 0.0);
  }
  sol.primal = to_original(y, false);
  sol.objective_value = 0.0;
  for (int j = 0; j < n; ++j) {
    sol.objective_value += lp.objective[static_cast<std::size_t>(j)] * sol.primal[static_cast<std::size_t>(j)];
  }

  if (entering >= 0) {
    sol.status = LpStatus::Unbounded;
    Eigen::VectorXd dir = Eigen::VectorXd::Zero(ncols);
    dir(entering) = 1.0;
    for (Eigen::Index r = 0; r < sx.rows(); ++r) {
      dir(sx.basis()[static_cast<std::size_t>(r)]) = -sx.entry(r, entering);
    }
    sol.ray = to_original(dir, true);
    double nrm = 0.0;
    for (double v : sol.ray) nrm = std::max(nrm, std::abs(v));
    if (nrm > 0.0) {
      for (double& v : sol.ray) v /= nrm;
    }
    return sol;
  }

  sol.status = LpStatus::Optimal;
  const Eigen::VectorXd pi = sx.duals(c2);
  sol.dual.assign(static_cast<std::size_t>(lp.num_rows()), 0.0);
  for (Eigen::Index r = 0; r < sx.rows(); ++r) {
    const auto& s = srows[static_cast<std::size_t>(sx.origin()[static_cast<std::size_t>(r)])];
    if (s.user >= 0) sol.dual[static_cast<std::size_t>(s.user)] = s.sign * pi(r);
  }
  sol.reduced_costs.assign(static_cast<std::size_t>(n), 0.0);
  double dual_obj = 0.0;
  for (int i = 0; i < lp.num_rows(); ++i) {
    dual_obj += sol.dual[static_cast<std::size_t>(i)] * lp.rows[static_cast<std::size_t>(i)].rhs;
  }
  for (int j = 0; j < n; ++j) {
    const auto ju = static_cast<std::size_t>(j);
    double r = lp.objective[ju];
    for (int i = 0; i < lp.num_rows(); ++i) {
      r -= sol.dual[static_cast<std::size_t>(i)] * lp.rows[static_cast<std::size_t>(i)].coeffs[ju];
    }
    sol.reduced_costs[ju] = r;
    double bound = sol.primal[ju];
    if (r > 0.0 && std::isfinite(lp.lower[ju])) bound = lp.lower[ju];
    if (r < 0.0 && std::isfinite(lp.upper[ju])) bound = lp.upper[ju];
    dual_obj += r * bound;
  }
  sol.dual_objective = dual_obj;
  return sol;
}

}  // namespace coporeg::lp

namespace coporeg::lp {

LpSolution solve_lp_by_dual(const std::vector<double>& c, const std::vector<Row>& rows,
                            const LpOptions& opts) {
  const int nz = static_cast<int>(c.size());
  const int m = static_cast<int>(rows.size());
  // Dual: max d'y  s.t.  M'y = c,  y >= 0 on >= rows, free on = rows.
  // A <= row is negated into a >= row and its multiplier negated back.
  LinearProgram dual(m);
  std::vector<double> sign(static_cast<std::size_t>(m), 1.0);
  for (int i = 0; i < m; ++i) {
    const auto& r = rows[static_cast<std::size_t>(i)];
    if (static_cast<int>(r.coeffs.size()) != nz) {
      throw InputError("LP row " + std::to_string(i) + " has the wrong length");
    }
    if (r.relation == Relation::LessEqual) sign[static_cast<std::size_t>(i)] = -1.0;
    if (r.relation == Relation::Equal) dual.lower[static_cast<std::size_t>(i)] = -kInf;
    dual.objective[static_cast<std::size_t>(i)] = -sign[static_cast<std::size_t>(i)] * r.rhs;
  }
  for (int j = 0; j < nz; ++j) {
    std::vector<double> col(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
      col[static_cast<std::size_t>(i)] =
          sign[static_cast<std::size_t>(i)] *
          rows[static_cast<std::size_t>(i)].coeffs[static_cast<std::size_t>(j)];
    }
    dual.add_row(std::move(col), Relation::Equal, c[static_cast<std::size_t>(j)]);
  }
  const LpSolution ds = solve_lp(dual, opts);

  LpSolution sol;
  sol.iterations = ds.iterations;
  sol.basis = ds.basis;
  if (ds.status == LpStatus::Unbounded) {
    sol.status = LpStatus::Infeasible;
    return sol;
  }
  if (ds.status == LpStatus::Infeasible) {
    sol.status = LpStatus::Unbounded;
    return sol;
  }
  sol.status = LpStatus::Optimal;
  sol.primal.resize(static_cast<std::size_t>(nz));
  for (int j = 0; j < nz; ++j) sol.primal[static_cast<std::size_t>(j)] = -ds.dual[static_cast<std::size_t>(j)];
  sol.dual.resize(static_cast<std::size_t>(m));
  sol.dual_objective = 0.0;
  for (int i = 0; i < m; ++i) {
    const double y = sign[static_cast<std::size_t>(i)] * ds.primal[static_cast<std::size_t>(i)];
    sol.dual[static_cast<std::size_t>(i)] = y;
    sol.dual_objective += y * rows[static_cast<std::size_t>(i)].rhs;
  }
  sol.objective_value = 0.0;
  for (int j = 0; j < nz; ++j) {
    sol.objective_value += c[static_cast<std::size_t>(j)] * sol.primal[static_cast<std::size_t>(j)];
  }
  sol.reduced_costs.assign(static_cast<std::size_t>(nz), 0.0);
  return sol;
}

}  // namespace coporeg::lp
