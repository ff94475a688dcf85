// coporeg - regularization of linear copositive programs
// Licensed under Apache 2.0

#pragma once

namespace coporeg {

/// Every numerical threshold used by the library, in one block so that a run
/// can echo exactly what it used.
struct Tolerances {
  double feas = 1e-9;      ///< simplex membership, row satisfaction, cut violation
  double support = 1e-7;   ///< t_k > support  <=>  k in P_+(t)
  double rank = 1e-10;     ///< pivot threshold in rank tests
  double cop = 1e-9;       ///< min over T >= -cop  <=>  copositive
  double strict = 1e-9;    ///< min over T > strict  <=>  strictly copositive
  double lp = 1e-9;        ///< LP primal/dual feasibility
  double mult = 1e-7;      ///< multipliers at or below this are zero
  double neg = 1e-6;       ///< master optimum <= -neg  =>  negative branch
  double zero = 1e-7;      ///< |master optimum| <= zero  =>  zero branch
  double cert = 1e-7;      ///< certificate stationarity / kernel residual
  double band = 1e-6;      ///< tie band for sampled feasibility comparisons
};

inline constexpr double kDefaultTolFeas = 1e-9;
inline constexpr double kDefaultTolSupport = 1e-7;
inline constexpr double kDefaultTolRank = 1e-10;

}  // namespace coporeg
