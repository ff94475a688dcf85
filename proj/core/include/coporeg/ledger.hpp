// coporeg - regularization of linear copositive programs
// Licensed under Apache 2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coporeg/model.hpp"
#include "coporeg/sip.hpp"
#include "coporeg/tolerances.hpp"

namespace coporeg {

/// One facial-reduction step: Y_m and the records describing F_m
/// (`face`) and F_{m-1} (`prior`).
struct FaceLedgerEntry {
  int m = 0;
  SymMatrix Y{1};
  std::vector<IndexRecord> face;
  std::vector<IndexRecord> prior;
  DualCertificate certificate;
  bool cond_11star = true;
  double kernel_residual = 0.0;
};

/// max_j |A_j . Y|.
double kernel_residual(const CopositiveProgram& prog, const SymMatrix& Y);

/// Y = sum gamma tau tau' + sum (tau lambda' + lambda tau') over the prior
/// records. Throws LedgerError if Y leaves Ker A by more than tol_cert.
SymMatrix build_Y(const CopositiveProgram& prog, const DualCertificate& cert,
                  const std::vector<IndexRecord>& prior, double tol_cert = 1e-7);

/// D in F: D copositive, e_k'D tau = 0 for k in L, e_k'D tau >= 0 otherwise,
/// for every record. No records: the whole cone.
bool face_membership(const std::vector<IndexRecord>& face, const SymMatrix& D,
                     const Tolerances& tol = {}, int p_max = 14);
inline bool face_membership(const FaceLedgerEntry& e, const SymMatrix& D,
                            const Tolerances& tol = {}, int p_max = 14) {
  return face_membership(e.face, D, tol, p_max);
}

struct LedgerCheck {
  int m;
  std::string condition;  ///< "I", "II", "III-monotone", "III-orthogonal"
  bool ok;
  double worst;           ///< largest residual or violation seen
  int tested;             ///< sampled matrices that exercised the check
  std::string detail;
};

struct LedgerReport {
  std::vector<LedgerCheck> checks;
  int violations() const;
  bool ok() const { return violations() == 0; }
};

struct VerifyOptions {
  Tolerances tol;
  int samples = 200;  ///< copositive matrices per entry
  std::uint64_t seed = 7;
  int p_max = 14;
};

/// Kernel residuals exactly; face monotonicity F_m in F_{m-1} and
/// orthogonality D . Y_m = 0 on sampled copositive matrices; Y_m in the
/// dual of F_{m-1} by the sign pattern of the stored certificate, a rebuild
/// of Y_m from it, and D . Y_m >= 0 on samples from F_{m-1}.
LedgerReport verify_ledger(const std::vector<FaceLedgerEntry>& entries,
                           const CopositiveProgram& prog, const VerifyOptions& opts = {});

struct CompressedLedger {
  std::vector<int> core;      ///< ledger positions m of the kept entries
  std::vector<int> squeezed;  ///< positions dropped as linearly dependent
  int s_star = 0;             ///< core.size() - 1
  int ker_dim = 0;
};

/// Keeps Y_m iff it is independent of the Y's kept before it.
/// Throws LedgerError if s* exceeds dim Ker A.
CompressedLedger compress_ledger(const std::vector<FaceLedgerEntry>& entries,
                                 const CopositiveProgram& prog, double tol_rank = 1e-10);

/// The span test on bare matrices; returns the kept positions (0-based).
std::vector<int> independent_prefix_members(const std::vector<SymMatrix>& ys,
                                            double tol_rank = 1e-10);

}  // namespace coporeg
