// coporeg - regularization of linear copositive programs
// Licensed under Apache 2.0

#include "coporeg/omega_grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "coporeg/errors.hpp"

namespace coporeg {

namespace {

int denominator_for(double h) {
  if (!(h > 0.0) || h > 1.0) throw InputError("grid resolution h must lie in (0, 1]");
  return static_cast<int>(std::ceil(1.0 / h - 1e-12));
}

double spread(const Eigen::Ref<const Eigen::VectorXd>& v) { return v.maxCoeff() - v.minCoeff(); }

}  // namespace

SimplexGrid::SimplexGrid(int p, double h) : p_(p), n_(denominator_for(h)), h_(h) {
  if (p < 1) throw InputError("grid dimension must be positive");
  radius_ = static_cast<double>(p) / (2.0 * n_);
  build(kDefaultTolFeas);
}

SimplexGrid::SimplexGrid(const OmegaDescriptor& omega, double h, double tol_feas)
    : p_(omega.dim()), n_(denominator_for(h)), h_(h), omega_(omega) {
  radius_ = static_cast<double>(p_) / (2.0 * n_);
  build(tol_feas);
}

void SimplexGrid::build(double tol_feas) {
  std::vector<double> coords;
  member_.clear();
  const double inv = 1.0 / n_;

  if (!omega_) {
    for_each_composition(p_, n_, [&](const std::vector<int>& c) {
      for (int v : c) coords.push_back(v * inv);
      member_.push_back(true);
    });
  } else {
    const auto& V = omega_->points();
    const double sig = omega_->sigma();
    const IndexSet supp = omega_->support();
    const double keep_at = sig - radius_ - tol_feas;
    const double member_at = sig - tol_feas;
    std::vector<double> t(static_cast<std::size_t>(p_));
    for_each_composition(p_, n_, [&](const std::vector<int>& c) {
      double outside = 0.0;
      for (int k = 0; k < p_; ++k) {
        t[static_cast<std::size_t>(k)] = c[static_cast<std::size_t>(k)] * inv;
        if (!supp.contains(k)) outside += t[static_cast<std::size_t>(k)];
      }
      // Cheap bounds on rho first: the nearest point of V from above, and
      // twice the mass off the union support from below.
      double ub = std::numeric_limits<double>::infinity();
      for (const auto& v : V) {
        double dist = 0.0;
        for (int k = 0; k < p_; ++k) dist += std::abs(t[static_cast<std::size_t>(k)] - v[k]);
        ub = std::min(ub, dist);
      }
      double rho;
      if (V.size() == 1) {
        rho = ub;
      } else if (ub < keep_at) {
        return;
      } else if (2.0 * outside >= member_at) {
        rho = 2.0 * outside;
      } else if (ub < member_at && 2.0 * outside >= keep_at) {
        rho = keep_at;
      } else {
        rho = l1_dist_to_hull(SimplexPoint(t), V);
      }
      if (rho < keep_at) return;
      for (double v : t) coords.push_back(v);
      member_.push_back(rho >= member_at);
    });
  }

  const auto count = static_cast<Eigen::Index>(member_.size());
  pts_ = Eigen::Map<const Eigen::MatrixXd>(coords.data(), p_, count);
  members_ = static_cast<std::size_t>(std::count(member_.begin(), member_.end(), true));
  // Vertices are grid points and Omega, when nonempty, contains a vertex,
  // so an empty member list means an empty domain.
  empty_ = members_ == 0;
}

SimplexPoint SimplexGrid::point(std::size_t j) const {
  const auto col = pts_.col(static_cast<Eigen::Index>(j));
  return SimplexPoint(std::vector<double>(col.data(), col.data() + p_));
}

OmegaResult SimplexGrid::minimize(const SymMatrix& d) const {
  if (d.dim() != p_) throw InputError("matrix and grid dimensions differ");
  if (empty_) return EmptyIndexSet{};
  const Eigen::MatrixXd& D = d.matrix();
  const Eigen::MatrixXd dp = D * pts_;
  const double lipschitz = 2.0 * d.max_abs();
  const double curv = 0.5 * radius_ * radius_ * (D.maxCoeff() - D.minCoeff());

  double best = std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  double lb = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < pts_.cols(); ++j) {
    const double q = pts_.col(j).dot(dp.col(j));
    // Second-order bound over the l1 ball of radius r around the grid point
    // (directions sum to zero), and the plain Lipschitz bound.
    const double local = q - radius_ * spread(dp.col(j)) - curv;
    lb = std::min(lb, std::max(local, q - lipschitz * radius_));
    if (member_[static_cast<std::size_t>(j)] && q < best) {
      best = q;
      arg = static_cast<std::size_t>(j);
    }
  }
  SimplexPoint t = point(arg);
  const double value = quad_form(d, t);
  return OracleResult{value, std::move(t),
                      GridCertificate{h_, n_, radius_, lipschitz, std::min(lb, value)}};
}

std::vector<std::pair<SimplexPoint, double>> SimplexGrid::below(const SymMatrix& d,
                                                                double threshold,
                                                                int max_count) const {
  std::vector<std::pair<SimplexPoint, double>> out;
  if (empty_ || max_count <= 0) return out;
  const Eigen::MatrixXd dp = d.matrix() * pts_;
  std::vector<std::pair<double, Eigen::Index>> hits;
  for (Eigen::Index j = 0; j < pts_.cols(); ++j) {
    if (!member_[static_cast<std::size_t>(j)]) continue;
    const double q = pts_.col(j).dot(dp.col(j));
    if (q < threshold) hits.emplace_back(q, j);
  }
  std::sort(hits.begin(), hits.end());
  if (hits.size() > static_cast<std::size_t>(max_count)) hits.resize(static_cast<std::size_t>(max_count));
  for (const auto& [q, j] : hits) {
    SimplexPoint t = point(static_cast<std::size_t>(j));
    const double v = quad_form(d, t);
    out.emplace_back(std::move(t), v);
  }
  return out;
}

OmegaBound bound_quad_over_omega(const SymMatrix& d, const OmegaDescriptor& omega, double target,
                                 int max_cells, double tol_feas) {
  const int p = d.dim();
  if (omega.dim() != p) throw InputError("matrix and Omega dimensions differ");
  const double sig = omega.sigma();
  OmegaBound out{std::numeric_limits<double>::infinity(), true, std::nullopt, 0};
  auto rho = [&](const Eigen::VectorXd& u) { return omega.distance(SimplexPoint::project_rounded(u)); };

  struct Cell {
    Eigen::MatrixXd U;  // vertices as columns
    Eigen::VectorXd r;  // rho at the vertices
  };
  std::vector<Cell> stack;
  {
    Cell root{Eigen::MatrixXd::Identity(p, p), Eigen::VectorXd(p)};
    for (int i = 0; i < p; ++i) root.r(i) = rho(root.U.col(i));
    stack.push_back(std::move(root));
  }
  while (!stack.empty()) {
    Cell c = std::move(stack.back());
    stack.pop_back();
    ++out.cells;
    if (c.r.maxCoeff() < sig - tol_feas) continue;
    const Eigen::MatrixXd M = c.U.transpose() * d.matrix() * c.U;
    const OracleResult res = min_quad_over_simplex(SymMatrix(0.5 * (M + M.transpose())), p);
    const double m = res.value;
    if (m >= target) {
      out.lower_bound = std::min(out.lower_bound, m);
      continue;
    }
    const SimplexPoint t = SimplexPoint::project_rounded(c.U * res.argmin.vec());
    if (omega.contains(t, tol_feas)) {
      // Cells still on the stack are unexamined; no finite bound is known.
      out.lower_bound = -std::numeric_limits<double>::infinity();
      out.certified = false;
      out.below = t;
      return out;
    }
    int a = 0;
    int b = 1;
    double longest = -1.0;
    for (int i = 0; i < p; ++i) {
      for (int j = i + 1; j < p; ++j) {
        const double len = (c.U.col(i) - c.U.col(j)).lpNorm<1>();
        if (len > longest) {
          longest = len;
          a = i;
          b = j;
        }
      }
    }
    if (out.cells + static_cast<int>(stack.size()) >= max_cells || longest < 1e-9) {
      out.lower_bound = std::min(out.lower_bound, m);
      out.certified = false;
      continue;
    }
    const Eigen::VectorXd mid = 0.5 * (c.U.col(a) + c.U.col(b));
    const double rm = rho(mid);
    Cell left = c;
    left.U.col(b) = mid;
    left.r(b) = rm;
    c.U.col(a) = mid;
    c.r(a) = rm;
    stack.push_back(std::move(c));
    stack.push_back(std::move(left));
  }
  if (out.lower_bound < target) out.certified = false;
  return out;
}

}  // namespace coporeg
