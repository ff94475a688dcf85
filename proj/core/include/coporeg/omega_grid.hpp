// coporeg - regularization of linear copositive programs
// Licensed under Apache 2.0

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "coporeg/simplex_oracle.hpp"

namespace coporeg {

/// Calls f(counts) for every composition of N into p nonnegative parts, in
/// lexicographic order of the count vector.
template <class F>
void for_each_composition(int p, int N, F&& f) {
  std::vector<int> c(static_cast<std::size_t>(p), 0);
  auto fill = [&](auto&& self, int k, int rest) -> void {
    if (k == p - 1) {
      c[static_cast<std::size_t>(k)] = rest;
      f(static_cast<const std::vector<int>&>(c));
      return;
    }
    for (int v = 0; v <= rest; ++v) {
      c[static_cast<std::size_t>(k)] = v;
      self(self, k + 1, rest - v);
    }
  };
  fill(fill, 0, N);
}

/// Grid {counts / N} on T with N = ceil(1/h), restricted to a domain (all of
/// T, or Omega(V)). Built once, then reused for many quadratic forms.
///
/// Any point of T lies within l1 distance r = p / (2N) of some grid point
/// (largest-remainder rounding). Because rho(., conv V) is 1-Lipschitz in
/// l1, grid points with rho >= sigma - r cover Omega(V); those are kept
/// alongside the members proper and feed the lower bound.
class SimplexGrid {
 public:
  SimplexGrid(int p, double h);
  SimplexGrid(const OmegaDescriptor& omega, double h, double tol_feas = kDefaultTolFeas);

  int dim() const noexcept { return p_; }
  int denominator() const noexcept { return n_; }
  double h() const noexcept { return h_; }
  double radius() const noexcept { return radius_; }
  bool full_simplex() const noexcept { return !omega_.has_value(); }
  const std::optional<OmegaDescriptor>& omega() const noexcept { return omega_; }

  /// Points kept for the bound (domain members and the margin layer).
  std::size_t size() const { return static_cast<std::size_t>(pts_.cols()); }
  std::size_t members() const noexcept { return members_; }
  bool in_domain(std::size_t j) const { return member_[j]; }
  const Eigen::MatrixXd& points() const noexcept { return pts_; }
  SimplexPoint point(std::size_t j) const;

  /// True iff the domain itself is empty (decided exactly for Omega).
  bool empty_domain() const noexcept { return empty_; }

  /// Grid minimum over domain members with a certified lower bound over the
  /// whole domain. EmptyIndexSet when the domain is empty.
  OmegaResult minimize(const SymMatrix& d) const;

  /// Domain members with t'Dt < threshold, most negative first (grid order
  /// on ties), at most max_count of them.
  std::vector<std::pair<SimplexPoint, double>> below(const SymMatrix& d, double threshold,
                                                     int max_count) const;

 private:
  void build(double tol_feas);

  int p_;
  int n_;
  double h_;
  double radius_;
  std::optional<OmegaDescriptor> omega_;
  Eigen::MatrixXd pts_;
  std::vector<bool> member_;
  std::size_t members_ = 0;
  bool empty_ = false;
};

/// Outcome of bound_quad_over_omega.
struct OmegaBound {
  double lower_bound;   ///< valid lower bound of t'Dt over Omega (+inf if empty, -inf after an early stop)
  bool certified;       ///< lower_bound >= target
  std::optional<SimplexPoint> below;  ///< a point of Omega with t'Dt < target, if met
  int cells = 0;
};

/// Adaptive bound of t'Dt over Omega(V) against a target. T is split into
/// sub-simplices. A cell whose vertices are all closer than sigma to conv V
/// misses Omega (rho is convex) and is dropped; every other cell gets the
/// exact minimum of the form over the cell, and only cells whose minimizer
/// leaves Omega with a value below target are bisected along their longest
/// edge. Stops at the first minimizer inside Omega below target.
OmegaBound bound_quad_over_omega(const SymMatrix& d, const OmegaDescriptor& omega, double target,
                                 int max_cells = 20000, double tol_feas = kDefaultTolFeas);

}  // namespace coporeg
