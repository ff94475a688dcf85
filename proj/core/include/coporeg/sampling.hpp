// coporeg - regularization of linear copositive programs
// Licensed under Apache 2.0

#pragma once

#include <random>
#include <vector>

#include "coporeg/model.hpp"

namespace coporeg {

/// A point t with the rows Z on which D t must vanish.
struct FaceConstraint {
  SimplexPoint t;
  IndexSet zero_rows;
};

/// Random copositive matrices of the form N + G G' (N entrywise
/// nonnegative, G G' a Gram matrix), scaled to max-entry 1.
class CopositiveSampler {
 public:
  CopositiveSampler(int p, std::uint64_t seed);

  /// Unconstrained N + GG'.
  SymMatrix any();

  /// N + GG' with G orthogonal to every constraint point and N zero on the
  /// blocks Z x P_+(t) and P_+(t) x Z. Such D is copositive with
  /// (Dt)_k = 0 for k in Z and (Dt)_k >= 0 elsewhere.
  SymMatrix on_face(const std::vector<FaceConstraint>& face);

  std::mt19937_64& rng() noexcept { return rng_; }

 private:
  SymMatrix combine(Eigen::MatrixXd n, const Eigen::MatrixXd& g);

  int p_;
  std::mt19937_64 rng_;
};

}  // namespace coporeg
