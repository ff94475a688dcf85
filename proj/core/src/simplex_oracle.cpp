// coporeg - regularization of linear copositive programs
// Licensed under Apache 2.0

#include "coporeg/simplex_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "coporeg/errors.hpp"
#include "coporeg/lp.hpp"
#include "coporeg/omega_grid.hpp"

namespace coporeg {

double OracleResult::lower_bound() const {
  if (const auto* g = std::get_if<GridCertificate>(&certificate)) return g->value_lb;
  return value;
}

std::vector<StationaryPoint> stationary_points(const SymMatrix& d, int p_max) {
  const int p = d.dim();
  if (p > p_max || p > 30) {
    throw CapabilityError("support enumeration needs p <= " + std::to_string(p_max) + " (got " +
                          std::to_string(p) + "); use grid mode");
  }
  const Eigen::MatrixXd& D = d.matrix();
  std::vector<StationaryPoint> out;
  std::vector<int> idx;
  idx.reserve(static_cast<std::size_t>(p));
  const std::uint64_t end = std::uint64_t{1} << p;
  for (std::uint64_t mask = 1; mask < end; ++mask) {
    idx.clear();
    for (int k = 0; k < p; ++k) {
      if ((mask >> k) & 1u) idx.push_back(k);
    }
    const auto s = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(s + 1, s + 1);
    for (Eigen::Index a = 0; a < s; ++a) {
      for (Eigen::Index b = 0; b < s; ++b) {
        kkt(a, b) = D(idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(b)]);
      }
      kkt(a, s) = -1.0;
      kkt(s, a) = 1.0;
    }
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(s + 1);
    rhs(s) = 1.0;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible()) continue;
    const Eigen::VectorXd sol = lu.solve(rhs);
    if (sol.head(s).minCoeff() < -1e-12) continue;

    Eigen::VectorXd t = Eigen::VectorXd::Zero(p);
    for (Eigen::Index a = 0; a < s; ++a) {
      t(idx[static_cast<std::size_t>(a)]) = std::max(sol(a), 0.0);
    }
    const double sum = t.sum();
    if (!(sum > 0.0)) continue;
    t /= sum;
    SimplexPoint pt = SimplexPoint::project_rounded(t);
    const double value = quad_form(d, pt);
    out.push_back({std::move(pt), value, mask, sol(s)});
  }
  return out;
}

OracleResult min_quad_over_simplex(const SymMatrix& d, int p_max) {
  auto cands = stationary_points(d, p_max);
  // Vertices always have a nonsingular system, so the list is never empty.
  std::size_t best = 0;
  for (std::size_t i = 1; i < cands.size(); ++i) {
    if (cands[i].value < cands[best].value) best = i;
  }
  auto& c = cands[best];
  return {c.value, std::move(c.point), ExactCertificate{c.support_mask, c.multiplier}};
}

OracleResult min_quad_over_simplex_grid(const SymMatrix& d, double h) {
  SimplexGrid grid(d.dim(), h);
  return std::get<OracleResult>(grid.minimize(d));
}

CopositivityVerdict is_copositive(const SymMatrix& d, double tol_cop, int p_max) {
  auto r = min_quad_over_simplex(d, p_max);
  if (r.value >= -tol_cop) return Copositive{r.value};
  return NotCopositive{std::move(r.argmin), r.value};
}

bool is_strictly_copositive(const SymMatrix& d, double tol_strict, int p_max) {
  return min_quad_over_simplex(d, p_max).value > tol_strict;
}

double l1_dist_to_hull(const SimplexPoint& t, const std::vector<SimplexPoint>& V) {
  if (V.empty()) throw InputError("point set must be nonempty");
  const int p = t.dim();
  for (const auto& v : V) {
    if (v.dim() != p) throw InputError("point dimension mismatch");
  }
  if (V.size() == 1) return t.l1_distance(V.front());
  if (V.size() == 2) {
    // sum_k |d_k - lam e_k| is minimized at a weighted median of d_k / e_k
    // (weights |e_k|), clamped to the segment.
    const auto& a = V[0];
    const auto& b = V[1];
    std::vector<std::pair<double, double>> knots;
    double total = 0.0;
    for (int k = 0; k < p; ++k) {
      const double e = b[k] - a[k];
      if (e == 0.0) continue;
      knots.emplace_back((t[k] - a[k]) / e, std::abs(e));
      total += std::abs(e);
    }
    double lam = 0.0;
    if (!knots.empty()) {
      std::sort(knots.begin(), knots.end());
      double acc = 0.0;
      for (const auto& [z, w] : knots) {
        acc += w;
        if (acc >= 0.5 * total) {
          lam = z;
          break;
        }
      }
      lam = std::clamp(lam, 0.0, 1.0);
    }
    double dist = 0.0;
    for (int k = 0; k < p; ++k) dist += std::abs(t[k] - a[k] - lam * (b[k] - a[k]));
    return dist;
  }

  // Variables: w (|V|), then s (p).  min sum s,  s >= |t - V w|,  sum w = 1.
  const int nv = static_cast<int>(V.size());
  lp::LinearProgram prob(nv + p);
  for (int k = 0; k < p; ++k) prob.objective[static_cast<std::size_t>(nv + k)] = 1.0;
  for (int k = 0; k < p; ++k) {
    std::vector<double> up(static_cast<std::size_t>(nv + p), 0.0);
    std::vector<double> lo(static_cast<std::size_t>(nv + p), 0.0);
    for (int j = 0; j < nv; ++j) {
      up[static_cast<std::size_t>(j)] = V[static_cast<std::size_t>(j)][k];
      lo[static_cast<std::size_t>(j)] = -V[static_cast<std::size_t>(j)][k];
    }
    up[static_cast<std::size_t>(nv + k)] = 1.0;
    lo[static_cast<std::size_t>(nv + k)] = 1.0;
    prob.add_row(std::move(up), lp::Relation::GreaterEqual, t[k]);
    prob.add_row(std::move(lo), lp::Relation::GreaterEqual, -t[k]);
  }
  std::vector<double> sum(static_cast<std::size_t>(nv + p), 0.0);
  std::fill_n(sum.begin(), nv, 1.0);
  prob.add_row(std::move(sum), lp::Relation::Equal, 1.0);
  const auto sol = lp::solve_lp(prob);
  if (sol.status != lp::LpStatus::Optimal) {
    throw SolverError(std::string("hull distance LP returned ") + lp::to_string(sol.status));
  }
  return std::max(sol.objective_value, 0.0);
}

double sigma(const std::vector<SimplexPoint>& V, double tol_support) {
  if (V.empty()) throw InputError("sigma needs a nonempty point set");
  double s = std::numeric_limits<double>::infinity();
  for (const auto& v : V) {
    for (int k = 0; k < v.dim(); ++k) {
      if (v[k] > tol_support) s = std::min(s, v[k]);
    }
  }
  return s;
}

OmegaDescriptor::OmegaDescriptor(std::vector<SimplexPoint> V, double tol_support)
    : v_(std::move(V)) {
  if (v_.empty()) throw InputError("Omega needs a nonempty point set");
  const int p = v_.front().dim();
  for (const auto& v : v_) {
    if (v.dim() != p) throw InputError("point dimension mismatch in Omega");
    support_ = support_ | v.positive_support(tol_support);
  }
  sigma_ = coporeg::sigma(v_, tol_support);
}

bool OmegaDescriptor::contains(const SimplexPoint& t, double tol_feas) const {
  return distance(t) >= sigma_ - tol_feas;
}

bool OmegaDescriptor::is_empty(double tol_feas) const {
  for (int k = 0; k < dim(); ++k) {
    if (contains(SimplexPoint::vertex(dim(), k), tol_feas)) return false;
  }
  return true;
}

OmegaResult min_quad_over_omega(const SymMatrix& d, const OmegaDescriptor& omega, double h) {
  if (d.dim() != omega.dim()) throw InputError("matrix and Omega dimensions differ");
  SimplexGrid grid(omega, h);
  return grid.minimize(d);
}

}  // namespace coporeg
