// coporeg - regularization of linear copositive programs
// Licensed under Apache 2.0

#include "coporeg/minimal_face.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "coporeg/errors.hpp"
#include "coporeg/lp.hpp"
#include "coporeg/omega_grid.hpp"
#include "coporeg/problem_io.hpp"
#include "coporeg/sampling.hpp"

namespace coporeg {

namespace {

std::optional<SimplexGrid> domain_grid(const RegularizedProblem& reg, int p, const MinimalFaceOptions& opts) {
  if (reg.omega_empty) return std::nullopt;
  if (reg.omega) return SimplexGrid(*reg.omega, opts.h, opts.tol.feas);
  return SimplexGrid(p, opts.h);
}

// Affine coefficients (const, x_1..x_n) of t'A(x)t.
Eigen::VectorXd quad_coeffs(const CopositiveProgram& prog, const SimplexPoint& t) {
  Eigen::VectorXd q(prog.n() + 1);
  for (int j = 0; j <= prog.n(); ++j) q(j) = quad_form(prog.A(j), t);
  return q;
}

double affine(const Eigen::VectorXd& a, const std::vector<double>& x) {
  double v = a(0);
  for (std::size_t j = 0; j < x.size(); ++j) v += a(static_cast<Eigen::Index>(j) + 1) * x[j];
  return v;
}

// Rows and domain bound at x; true when x is certified feasible.
bool certified_feasible(const CopositiveProgram& prog, const std::vector<LinearRow>& rows,
                        const std::optional<SimplexGrid>& grid, const std::vector<double>& x,
                        double tol_feas) {
  for (const auto& r : rows) {
    const double v = r.eval(x);
    if (r.equality ? std::abs(v) > tol_feas : v < -tol_feas) return false;
  }
  if (!grid) return true;
  const auto res = grid->minimize(eval_constraint(prog, x));
  if (std::holds_alternative<EmptyIndexSet>(res)) return true;
  return std::get<OracleResult>(res).lower_bound() >= 0.0;
}

IndexSet compute_M_on(const CopositiveProgram& prog, const SimplexPoint& t,
                      const RegularizedProblem& reg, const std::optional<SimplexGrid>& grid,
                      const MinimalFaceOptions& opts, std::vector<std::string>* notes) {
  const int n = prog.n();
  const int p = prog.p();
  const auto nz = static_cast<std::size_t>(n);
  if (t.dim() != p) throw InputError("point dimension differs from the program");
  const auto& tol = opts.tol;
  IndexSet M = t.positive_support(tol.support);

  std::vector<LinearRow> rows;
  for (auto& r : reg.rows()) {
    if (!r.trivial) rows.push_back(std::move(r));
  }
  std::vector<lp::Row> base;
  for (const auto& r : rows) {
    std::vector<double> c(nz);
    for (int j = 0; j < n; ++j) c[static_cast<std::size_t>(j)] = r.coeffs(j + 1);
    base.push_back({std::move(c), r.equality ? lp::Relation::Equal : lp::Relation::GreaterEqual,
                    -r.coeffs(0)});
  }
  for (int j = 0; j < n; ++j) {
    std::vector<double> lo(nz, 0.0);
    std::vector<double> hi(nz, 0.0);
    lo[static_cast<std::size_t>(j)] = 1.0;
    hi[static_cast<std::size_t>(j)] = -1.0;
    base.push_back({std::move(lo), lp::Relation::GreaterEqual, -opts.R});
    base.push_back({std::move(hi), lp::Relation::GreaterEqual, -opts.R});
  }
  auto add_cut = [&](std::vector<lp::Row>& out, const SimplexPoint& s) {
    const Eigen::VectorXd q = quad_coeffs(prog, s);
    std::vector<double> c(nz);
    for (int j = 0; j < n; ++j) c[static_cast<std::size_t>(j)] = q(j + 1);
    out.push_back({std::move(c), lp::Relation::GreaterEqual, -q(0)});
  };

  std::vector<SimplexPoint> seed_cuts;
  if (grid) {
    for (std::size_t g = 0; g < grid->size(); ++g) {
      if (!grid->in_domain(g)) continue;
      const SimplexPoint s = grid->point(g);
      if (s.positive_support(tol.support).size() == 1) seed_cuts.push_back(s);
    }
  }

  for (int k = 0; k < p; ++k) {
    if (M.contains(k)) continue;
    Eigen::VectorXd f(n + 1);
    for (int j = 0; j <= n; ++j) f(j) = row_action(prog.A(j), t, k);

    std::vector<SimplexPoint> cuts = seed_cuts;
    std::vector<double> c(nz);
    for (int j = 0; j < n; ++j) c[static_cast<std::size_t>(j)] = -f(j + 1);
    std::vector<double> x;
    bool box_hit = false;
    for (int round = 0; round <= opts.max_rounds; ++round) {
      std::vector<lp::Row> lrows = base;
      for (const auto& s : cuts) add_cut(lrows, s);
      const auto sol = lp::solve_lp_by_dual(c, lrows);
      if (sol.status != lp::LpStatus::Optimal) {
        throw SolverError(std::string("row maximization LP is ") + lp::to_string(sol.status));
      }
      x = sol.primal;
      box_hit = std::any_of(x.begin(), x.end(),
                            [&](double v) { return std::abs(v) >= opts.R * (1.0 - 1e-9); });
      if (!grid || (box_hit && affine(f, x) > tol.feas)) break;
      const auto cands = grid->below(eval_constraint(prog, x), -tol.feas, opts.cuts_per_round);
      bool added = false;
      for (const auto& [s, v] : cands) {
        const bool dup = std::any_of(cuts.begin(), cuts.end(),
                                     [&](const SimplexPoint& o) { return o.linf_distance(s) <= 1e-12; });
        if (!dup) {
          cuts.push_back(s);
          added = true;
        }
      }
      if (!added) break;
    }
    const double sup = affine(f, x);
    if (sup <= tol.feas) {
      M.insert(k);
      continue;
    }

    // Exclusion needs a feasible point with positive row value; walk from
    // the relaxation optimum toward the witness.
    bool certified = false;
    if (!reg.witness.empty()) {
      std::vector<double> xl(nz);
      for (double lam = 1.0; lam >= 1.0 / 1048576.0; lam *= 0.5) {
        for (std::size_t j = 0; j < nz; ++j) xl[j] = (1.0 - lam) * reg.witness[j] + lam * x[j];
        if (affine(f, xl) > tol.feas && certified_feasible(prog, rows, grid, xl, tol.feas)) {
          certified = true;
          break;
        }
      }
    }
    if (notes) {
      std::ostringstream os;
      os << "row " << k + 1;
      if (box_hit) os << " unbounded above";
      if (!certified) os << (box_hit ? "," : "") << " uncertified";
      if (box_hit || !certified) notes->push_back(os.str());
    }
  }
  return M;
}

bool rows_vanish(const SymMatrix& D, const SimplexPoint& t, const IndexSet& M, double tol, bool sign) {
  const Eigen::VectorXd dt = D.matrix() * t.vec();
  for (int k = 0; k < D.dim(); ++k) {
    if (M.contains(k) ? std::abs(dt(k)) > tol : (sign && dt(k) < -tol)) return false;
  }
  return true;
}

}  // namespace

IndexSet compute_M(const CopositiveProgram& prog, const SimplexPoint& t, const RegularizedProblem& reg,
                   const MinimalFaceOptions& opts, std::vector<std::string>* notes) {
  return compute_M_on(prog, t, reg, domain_grid(reg, prog.p(), opts), opts, notes);
}

bool MinimalFaceDescriptor::kmin1(const SymMatrix& D) const {
  const double tl = tol.feas * (1.0 + D.max_abs());
  for (std::size_t j = 0; j < vertices.size(); ++j) {
    if (!rows_vanish(D, vertices[j], M[j], tl, false)) return false;
  }
  return std::holds_alternative<Copositive>(is_copositive(D, tol.cop, p_max));
}

bool MinimalFaceDescriptor::kmin2(const SymMatrix& D) const {
  const double tl = tol.feas * (1.0 + D.max_abs());
  for (std::size_t j = 0; j < vertices.size(); ++j) {
    if (!rows_vanish(D, vertices[j], M[j], tl, true)) return false;
  }
  return std::holds_alternative<Copositive>(is_copositive(D, tol.cop, p_max));
}

MinimalFaceDescriptor minimal_face(const CopositiveProgram& prog, const std::vector<SimplexPoint>& W,
                                   const RegularizedProblem& reg, const MinimalFaceOptions& opts) {
  MinimalFaceDescriptor d;
  d.vertices = W;
  d.tol = opts.tol;
  d.p_max = opts.p_max;
  const auto grid = domain_grid(reg, prog.p(), opts);
  for (std::size_t j = 0; j < W.size(); ++j) {
    std::vector<std::string> notes;
    d.M.push_back(compute_M_on(prog, W[j], reg, grid, opts, &notes));
    for (auto& s : notes) d.notes.push_back("vertex " + std::to_string(j + 1) + ": " + s);
  }
  return d;
}

CrossCheckReport cross_check(const MinimalFaceDescriptor& desc, int samples, std::uint64_t seed) {
  CrossCheckReport rep;
  if (desc.vertices.empty()) return rep;
  const int p = desc.vertices.front().dim();
  CopositiveSampler sampler(p, seed);
  std::vector<FaceConstraint> face;
  for (std::size_t j = 0; j < desc.vertices.size(); ++j) face.push_back({desc.vertices[j], desc.M[j]});
  for (int s = 0; s < samples; ++s) {
    const SymMatrix D = s % 2 == 0 ? sampler.on_face(face) : sampler.any();
    const bool a = desc.kmin1(D);
    const bool b = desc.kmin2(D);
    ++rep.samples;
    if (a != b) {
      throw MismatchError("minimal-face predicates disagree on D = " + serialize_matrix(D));
    }
    if (a) ++rep.members;
  }
  return rep;
}

}  // namespace coporeg
