// coporeg - regularization of linear copositive programs
// Licensed under Apache 2.0

#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "coporeg/lp.hpp"
#include "coporeg/model.hpp"
#include "coporeg/omega_grid.hpp"
#include "coporeg/simplex_oracle.hpp"
#include "coporeg/tolerances.hpp"

namespace coporeg {

/// An index tau(i) together with its row set L(i): rows k in L(i) are
/// equalities e_k'A(x)tau(i) = 0, the others inequalities >= 0.
struct IndexRecord {
  SimplexPoint tau;
  IndexSet L;
};

/// e_k'A(x)tau(i) as an affine function: coeffs(0) + sum_j coeffs(j) x_j.
struct LinearRow {
  int record;
  int k;
  bool equality;
  Eigen::VectorXd coeffs;
  /// Identically zero in x (all |coeffs| <= 1e-13); kept in descriptions,
  /// left out of LPs.
  bool trivial;

  double eval(std::span<const double> x) const;
};

std::vector<LinearRow> linear_rows(const CopositiveProgram& prog,
                                   const std::vector<IndexRecord>& records);

struct SipInstance {
  CopositiveProgram prog;
  std::vector<IndexRecord> records;
  /// nullopt: the full simplex T.
  std::optional<OmegaDescriptor> omega;
};

struct SipOptions {
  Tolerances tol;
  double h = 1.0 / 128;      ///< grid resolution over Omega
  double R = 1e3;            ///< box |x_j| <= R in the master
  double mu_floor = -1.0;    ///< mu >= mu_floor keeps the master bounded below
  int max_rounds = 600;
  int cuts_per_round = 8;
  int refinement_rounds = 4;  ///< grid halvings when the sign of the optimum is unclear
  /// Compositions a grid may enumerate; h is coarsened to fit and
  /// refinements beyond it are skipped.
  double max_grid_points = 2e6;
  /// Cells for the adaptive bound used when the grid bound cannot certify
  /// a witness.
  int max_bound_cells = 20000;
  int box_growths = 3;        ///< R *= 10 retries when a certificate leans on the box
  int p_max = kDefaultPMax;
  bool a0_copositive = false;  ///< enables the (x, mu) = (0, 0) runtime check
};

struct NewIndex {
  SimplexPoint tau;
  double gamma;
};

/// Multipliers (gamma, lambda) with
///   sum_new gamma tau'A_j tau + 2 sum_old lambda(i)'A_j tau(i) = 0,  j = 0..n.
struct DualCertificate {
  std::vector<NewIndex> new_indices;
  /// One p-vector per existing record, in record order.
  std::vector<Eigen::VectorXd> lambda;
  double residual = 0.0;
};

/// max_j |stationarity_j| of a certificate against (prog, records).
double certificate_residual(const CopositiveProgram& prog, const std::vector<IndexRecord>& records,
                            const DualCertificate& cert);

struct NegativeFeasible {
  std::vector<double> x;
  double mu;       ///< mu-bar < 0
  double margin;   ///< certified lower bound of t'A(x)t over the domain
  bool vacuous = false;  ///< the domain was empty; only linear rows apply
  double h = 0.0;
  int rounds = 0;
};

struct OptimalZero {
  DualCertificate certificate;
  std::vector<double> x;  ///< final master point
  double mu;
  double h = 0.0;
  double R = 0.0;
  int rounds = 0;
  int cuts = 0;
  bool reduced = false;  ///< support reduction was needed
};

struct Unresolved {
  std::string reason;
  double mu;
  int rounds = 0;
};

using SipOutcome = std::variant<NegativeFeasible, OptimalZero, Unresolved>;

/// Cutting-plane master: min mu over (x, mu) subject to the box, the
/// nontrivial linear rows and the cuts t'A(x)t + mu >= 0.
/// LP row layout: cuts, then linear rows, then box rows.
class SipMaster {
 public:
  SipMaster(const SipInstance& inst, double R, double mu_floor);

  bool add_cut(const SimplexPoint& t);  ///< false for a duplicate
  const std::vector<SimplexPoint>& cuts() const noexcept { return cuts_; }
  const std::vector<LinearRow>& active_rows() const noexcept { return rows_; }
  double R() const noexcept { return r_; }

  std::vector<lp::Row> lp_rows() const;
  /// Solves the master; throws SolverError unless Optimal.
  lp::LpSolution solve(const lp::LpOptions& opts = {}) const;

 private:
  const SipInstance* inst_;
  double r_;
  double mu_floor_;
  std::vector<LinearRow> rows_;
  std::vector<SimplexPoint> cuts_;
  std::vector<Eigen::VectorXd> cut_coeffs_;  // (t'A_0t, t'A_1t, ..., t'A_nt)
};

/// Reads (gamma, lambda) off an optimal master whose optimum is zero. If the
/// raw duals miss stationarity or use more than n+1 cuts, the support is
/// reduced by an LP over the active cuts and rows. Throws CertificateError
/// when no certificate within tol.cert exists at this master point.
DualCertificate extract_certificate(const lp::LpSolution& master, const SipMaster& m,
                                    const SipInstance& inst, const SipOptions& opts,
                                    bool normalize, bool* reduced = nullptr);

SipOutcome solve_sip(const SipInstance& inst, const SipOptions& opts = {});

}  // namespace coporeg
