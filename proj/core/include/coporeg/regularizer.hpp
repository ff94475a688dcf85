// coporeg - regularization of linear copositive programs
// Licensed under Apache 2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "coporeg/ledger.hpp"
#include "coporeg/sip.hpp"

namespace coporeg {

struct IterationState {
  int m = 0;
  std::vector<IndexRecord> records;
};

/// Finitely many linear rows e_k'A(x)tau(i) (= or >= 0) plus
/// t'A(x)t >= 0 over Omega(W). Without `omega` the quadratic constraint
/// runs over all of T, i.e. the original problem.
struct RegularizedProblem {
  CopositiveProgram prog;
  std::vector<IndexRecord> records;
  std::optional<OmegaDescriptor> omega;
  std::vector<double> witness;
  double margin = 0.0;
  bool omega_empty = false;

  std::vector<LinearRow> rows() const { return linear_rows(prog, records); }
  std::vector<SimplexPoint> W() const;
};

/// The identity description of a program that already satisfies Slater.
RegularizedProblem identity_description(const CopositiveProgram& prog, std::vector<double> witness,
                                        double margin);

struct RegOptions {
  SipOptions sip;
  int cap = 0;  ///< iterations after the first; 0 means 2n + 2
};

struct IterationTrace {
  int m;
  std::string outcome;  ///< "negative", "zero", "unresolved"
  double mu;
  int rounds;
  double h;
  std::size_t new_indices = 0;
  bool cond_11star = true;
  std::string note;
};

struct Regular {
  std::vector<double> witness;
  double margin;
};

struct Regularized {
  RegularizedProblem problem;
  std::vector<FaceLedgerEntry> ledger;
  int m_star;
};

struct Failed {
  std::string diagnostics;
  std::vector<FaceLedgerEntry> ledger;
  IterationState state;
};

struct RegResult {
  std::variant<Regular, Regularized, Failed> outcome;
  std::vector<IterationTrace> trace;
  int cap = 0;
};

RegResult reg_lcop(const CopositiveProgram& prog, const RegOptions& opts = {});

struct UpdateResult {
  IterationState state;
  bool progress;
  std::vector<std::string> notes;
};

/// L(i) grows by {k not in L(i) : lambda_k(i) > tol_mult}; each new index
/// enters with L = P_+(tau). Progress means sum |L(i)| + |I| increased.
UpdateResult update_index_sets(const IterationState& state, const DualCertificate& cert,
                               const Tolerances& tol = {});

/// P_0(tau_new) meets P_+(tau_old) for every new index and old record.
bool check_disjointness_condition(const IterationState& old_state, const DualCertificate& cert,
                                  double tol_support = kDefaultTolSupport);

/// Rows A(x)t >= 0 for t in W (strict: equalities on P_+(t)) and a witness
/// positive on Omega(W). Throws InputError naming the blocking index when the
/// subproblem has optimum zero, i.e. W misses part of the immobile set.
RegularizedProblem one_step_regularize(const CopositiveProgram& prog,
                                       const std::vector<SimplexPoint>& W,
                                       const SipOptions& opts = {}, bool strict = false);

/// Points of W whose quadratic value leaves zero at some sampled x with A(x)
/// copositive; x is drawn from a box of the given radius around `center`.
std::vector<int> non_immobile(const CopositiveProgram& prog, const std::vector<SimplexPoint>& W,
                              const std::vector<double>& center, double radius, int samples,
                              std::uint64_t seed, double tol = 1e-6);

struct EquivOptions {
  Tolerances tol;
  /// Half-width of the sampling box; every other sample uses an eighth of
  /// it. 0: twice max(1, |center|_inf).
  double radius = 0.0;
  std::optional<std::vector<double>> center;  ///< default: the witness
  std::size_t max_grid_points = 2'000'000;    ///< h is coarsened to fit
  int max_bound_cells = 20000;                ///< adaptive bound for samples the grid leaves open
  double h = 1.0 / 128;
  int p_max = 14;
};

struct EquivReport {
  int samples = 0;
  int agreements = 0;
  int disagreements = 0;
  int ties = 0;       ///< within the band of either boundary, excluded
  int undecided = 0;  ///< sign left open by grid and adaptive bound, excluded
  int feasible = 0;   ///< agreed-feasible samples
  std::vector<std::vector<double>> disagreeing;
};

/// Compares x in X (exact copositivity of A(x)) with x in the regularized
/// description (rows plus the certified Omega grid) on uniform samples.
EquivReport feasibility_equiv_sample(const CopositiveProgram& prog, const RegularizedProblem& reg,
                                     int n_samples, std::uint64_t seed,
                                     const EquivOptions& opts = {});

}  // namespace coporeg
