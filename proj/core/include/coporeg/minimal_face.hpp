// coporeg - regularization of linear copositive programs
// Licensed under Apache 2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coporeg/regularizer.hpp"

namespace coporeg {

struct MinimalFaceOptions {
  Tolerances tol;
  double R = 1e3;          ///< box on x for the row maximization
  double h = 1.0 / 128;    ///< grid over Omega for separation and certification
  int max_rounds = 300;
  int cuts_per_round = 8;
  int p_max = kDefaultPMax;
};

/// Rows k with e_k'A(x)t = 0 on the whole feasible set, computed by
/// maximizing e_k'A(x)t over the regularized description. Rows in P_+(t) are
/// taken directly. Notes collect per-row flags ("unbounded above",
/// "uncertified").
IndexSet compute_M(const CopositiveProgram& prog, const SimplexPoint& t,
                   const RegularizedProblem& reg, const MinimalFaceOptions& opts = {},
                   std::vector<std::string>* notes = nullptr);

struct MinimalFaceDescriptor {
  std::vector<SimplexPoint> vertices;
  std::vector<IndexSet> M;
  std::vector<std::string> notes;
  Tolerances tol;
  int p_max = kDefaultPMax;

  /// D copositive and (D t(j))_k = 0 for k in M(j).
  bool kmin1(const SymMatrix& D) const;
  /// kmin1 plus (D t(j))_k >= 0 for k outside M(j).
  bool kmin2(const SymMatrix& D) const;
};

MinimalFaceDescriptor minimal_face(const CopositiveProgram& prog, const std::vector<SimplexPoint>& W,
                                   const RegularizedProblem& reg,
                                   const MinimalFaceOptions& opts = {});

struct CrossCheckReport {
  int samples = 0;
  int members = 0;  ///< samples inside the face (both predicates true)
};

/// Samples copositive matrices (half unconstrained, half built to vanish on
/// the M(j) rows) and compares the two predicates. Throws MismatchError with
/// the offending matrix on the first disagreement.
CrossCheckReport cross_check(const MinimalFaceDescriptor& desc, int samples, std::uint64_t seed);

}  // namespace coporeg
