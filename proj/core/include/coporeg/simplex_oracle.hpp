// coporeg - regularization of linear copositive programs
// Licensed under Apache 2.0

#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "coporeg/model.hpp"

namespace coporeg {

inline constexpr int kDefaultPMax = 14;

/// Minimizer found by support enumeration: on face `support_mask` the point
/// solves D_SS u = multiplier * 1, 1'u = 1.
struct ExactCertificate {
  std::uint64_t support_mask = 0;
  double multiplier = 0.0;
};

/// Minimizer found on the grid of compositions of N = ceil(1/h). Every point
/// of the domain lies within l1 distance `radius` of a grid point that was
/// evaluated, and `value_lb` bounds the true minimum from below.
struct GridCertificate {
  double h = 0.0;
  int denominator = 0;
  double radius = 0.0;
  double lipschitz = 0.0;
  double value_lb = 0.0;
};

struct OracleResult {
  double value;
  SimplexPoint argmin;
  std::variant<ExactCertificate, GridCertificate> certificate;

  bool exact() const { return std::holds_alternative<ExactCertificate>(certificate); }
  /// `value` for exact results, the certified lower bound otherwise.
  double lower_bound() const;
};

/// A stationary point of t'Dt on the relative interior of one face of T.
struct StationaryPoint {
  SimplexPoint point;
  double value;
  std::uint64_t support_mask;
  double multiplier;
};

/// All stationary points over the 2^p - 1 faces, in support-mask order.
/// Faces whose stationarity system is singular are skipped: along a null
/// direction the form is flat, so such a face never holds a minimizer that
/// is not also attained on its relative boundary.
std::vector<StationaryPoint> stationary_points(const SymMatrix& d, int p_max = kDefaultPMax);

/// Exact global minimum of t'Dt over T. Throws CapabilityError when
/// p > p_max; use min_quad_over_simplex_grid there.
OracleResult min_quad_over_simplex(const SymMatrix& d, int p_max = kDefaultPMax);

/// Certified grid minimum over T at resolution h.
OracleResult min_quad_over_simplex_grid(const SymMatrix& d, double h);

struct Copositive {
  double margin;
};
struct NotCopositive {
  SimplexPoint witness;
  double value;
};
using CopositivityVerdict = std::variant<Copositive, NotCopositive>;

CopositivityVerdict is_copositive(const SymMatrix& d, double tol_cop = 1e-9,
                                  int p_max = kDefaultPMax);
bool is_strictly_copositive(const SymMatrix& d, double tol_strict = 1e-9,
                            int p_max = kDefaultPMax);

/// rho(t, conv V) = min over the hull of the l1 distance, solved as an LP.
/// A single point is handled in closed form.
double l1_dist_to_hull(const SimplexPoint& t, const std::vector<SimplexPoint>& V);

/// Smallest positive coordinate over all points of V.
double sigma(const std::vector<SimplexPoint>& V, double tol_support = kDefaultTolSupport);

/// Omega(V) = {t in T : rho(t, conv V) >= sigma(V)}.
class OmegaDescriptor {
 public:
  explicit OmegaDescriptor(std::vector<SimplexPoint> V,
                           double tol_support = kDefaultTolSupport);

  const std::vector<SimplexPoint>& points() const noexcept { return v_; }
  double sigma() const noexcept { return sigma_; }
  int dim() const { return v_.front().dim(); }
  /// Union of the supports of V.
  IndexSet support() const noexcept { return support_; }

  double distance(const SimplexPoint& t) const { return l1_dist_to_hull(t, v_); }
  bool contains(const SimplexPoint& t, double tol_feas = kDefaultTolFeas) const;

  /// Omega is empty iff every vertex e_k of T is closer than sigma to conv V:
  /// rho(., conv V) is convex, so its maximum over T sits at a vertex. Exact
  /// up to the LP tolerance.
  bool is_empty(double tol_feas = kDefaultTolFeas) const;

 private:
  std::vector<SimplexPoint> v_;
  double sigma_;
  IndexSet support_;
};

/// Returned by min_quad_over_omega when Omega(V) has no points.
struct EmptyIndexSet {};
using OmegaResult = std::variant<OracleResult, EmptyIndexSet>;

/// Certified grid minimum of t'Dt over Omega(V); see SimplexGrid.
OmegaResult min_quad_over_omega(const SymMatrix& d, const OmegaDescriptor& omega, double h);

}  // namespace coporeg
