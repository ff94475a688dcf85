// coporeg - regularization of linear copositive programs
// Licensed under Apache 2.0

#include "coporeg/ledger.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "coporeg/errors.hpp"
#include "coporeg/sampling.hpp"
#include "coporeg/simplex_oracle.hpp"

namespace coporeg {

double kernel_residual(const CopositiveProgram& prog, const SymMatrix& Y) {
  double worst = 0.0;
  for (const auto& a : prog.matrices()) worst = std::max(worst, std::abs(inner(a, Y)));
  return worst;
}

SymMatrix build_Y(const CopositiveProgram& prog, const DualCertificate& cert,
                  const std::vector<IndexRecord>& prior, double tol_cert) {
  const int p = prog.p();
  if (cert.lambda.size() != prior.size()) {
    throw InputError("certificate lambda count differs from the prior record count");
  }
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(p, p);
  for (const auto& ni : cert.new_indices) y += ni.gamma * ni.tau.vec() * ni.tau.vec().transpose();
  for (std::size_t i = 0; i < prior.size(); ++i) {
    const Eigen::VectorXd t = prior[i].tau.vec();
    y += t * cert.lambda[i].transpose() + cert.lambda[i] * t.transpose();
  }
  y = 0.5 * (y + y.transpose()).eval();
  SymMatrix Y(y);
  const double res = kernel_residual(prog, Y);
  if (res > tol_cert) {
    std::ostringstream os;
    os << "Y leaves Ker A: residual " << res << " > " << tol_cert;
    throw LedgerError(os.str());
  }
  return Y;
}

bool face_membership(const std::vector<IndexRecord>& face, const SymMatrix& D,
                     const Tolerances& tol, int p_max) {
  const double scale = 1.0 + D.max_abs();
  for (const auto& rec : face) {
    if (rec.tau.dim() != D.dim()) throw InputError("face record dimension mismatch");
    const Eigen::VectorXd dt = D.matrix() * rec.tau.vec();
    for (int k = 0; k < D.dim(); ++k) {
      if (rec.L.contains(k) ? std::abs(dt(k)) > tol.feas * scale : dt(k) < -tol.feas * scale) {
        return false;
      }
    }
  }
  return std::holds_alternative<Copositive>(is_copositive(D, tol.cop, p_max));
}

int LedgerReport::violations() const {
  return static_cast<int>(std::count_if(checks.begin(), checks.end(),
                                        [](const LedgerCheck& c) { return !c.ok; }));
}

namespace {

std::vector<FaceConstraint> constraints_of(const std::vector<IndexRecord>& recs) {
  std::vector<FaceConstraint> out;
  for (const auto& r : recs) out.push_back({r.tau, r.L});
  return out;
}

}  // namespace

LedgerReport verify_ledger(const std::vector<FaceLedgerEntry>& entries,
                           const CopositiveProgram& prog, const VerifyOptions& opts) {
  LedgerReport rep;
  const auto& tol = opts.tol;
  const int p = prog.p();
  for (std::size_t e = 0; e < entries.size(); ++e) {
    const auto& en = entries[e];
    if (en.Y.dim() != p) throw InputError("ledger matrix dimension differs from the program");

    // (II) kernel membership.
    const double kr = kernel_residual(prog, en.Y);
    rep.checks.push_back({en.m, "II", kr <= tol.cert, kr, 0, "max_j |A_j . Y_m|"});

    // (I) generator form: gamma > 0 on simplex points, lambda >= 0 off L_{m-1},
    // and Y_m rebuilt from those pieces.
    {
      bool ok = en.certificate.lambda.size() == en.prior.size();
      double worst = 0.0;
      std::string detail = "certificate sign pattern and rebuild";
      for (const auto& ni : en.certificate.new_indices) {
        if (!(ni.gamma > 0.0)) {
          ok = false;
          detail = "nonpositive gamma";
        }
      }
      if (ok) {
        for (std::size_t i = 0; i < en.prior.size(); ++i) {
          for (int k = 0; k < p; ++k) {
            const double l = en.certificate.lambda[i](k);
            if (!en.prior[i].L.contains(k) && l < 0.0) {
              ok = false;
              worst = std::max(worst, -l);
              detail = "negative lambda off L_{m-1}";
            }
          }
        }
        Eigen::MatrixXd y = Eigen::MatrixXd::Zero(p, p);
        for (const auto& ni : en.certificate.new_indices) {
          y += ni.gamma * ni.tau.vec() * ni.tau.vec().transpose();
        }
        for (std::size_t i = 0; i < en.prior.size(); ++i) {
          const Eigen::VectorXd t = en.prior[i].tau.vec();
          y += t * en.certificate.lambda[i].transpose() + en.certificate.lambda[i] * t.transpose();
        }
        const double diff = (y - en.Y.matrix()).cwiseAbs().maxCoeff();
        worst = std::max(worst, diff);
        if (diff > 1e-10) {
          ok = false;
          detail = "Y_m differs from its certificate";
        }
      }
      rep.checks.push_back({en.m, "I", ok, worst, 0, detail});
    }

    // (III) on samples: a third from F_m, a third from F_{m-1}, a third
    // unconstrained.
    CopositiveSampler sampler(p, opts.seed + 7919 * static_cast<std::uint64_t>(e));
    const auto cf = constraints_of(en.face);
    const auto cp = constraints_of(en.prior);
    int in_face = 0;
    int in_prior = 0;
    int mono_bad = 0;
    int orth_bad = 0;
    int dual_bad = 0;
    double orth_worst = 0.0;
    double dual_worst = 0.0;
    for (int s = 0; s < opts.samples; ++s) {
      SymMatrix d = s % 3 == 0 ? sampler.on_face(cf) : s % 3 == 1 ? sampler.on_face(cp) : sampler.any();
      const double dy = inner(d, en.Y);
      const bool mf = face_membership(en.face, d, tol, opts.p_max);
      const bool mp = face_membership(en.prior, d, tol, opts.p_max);
      if (mf) {
        ++in_face;
        if (!mp) ++mono_bad;
        orth_worst = std::max(orth_worst, std::abs(dy));
        if (std::abs(dy) > tol.cert) ++orth_bad;
      }
      if (mp) {
        ++in_prior;
        dual_worst = std::max(dual_worst, -dy);
        if (dy < -tol.cert) ++dual_bad;
      }
    }
    rep.checks.push_back({en.m, "III-monotone", mono_bad == 0, static_cast<double>(mono_bad), in_face,
                          "members of F_m outside F_{m-1}"});
    rep.checks.push_back({en.m, "III-orthogonal", orth_bad == 0, orth_worst, in_face,
                          "|D . Y_m| over sampled D in F_m"});
    rep.checks.push_back({en.m, "I-sampled", dual_bad == 0, std::max(dual_worst, 0.0), in_prior,
                          "-(D . Y_m) over sampled D in F_{m-1}"});
  }
  return rep;
}

std::vector<int> independent_prefix_members(const std::vector<SymMatrix>& ys, double tol_rank) {
  std::vector<int> kept;
  if (ys.empty()) return kept;
  const int p = ys.front().dim();
  Eigen::MatrixXd rows(0, p * p);
  int rank = 0;
  for (std::size_t m = 0; m < ys.size(); ++m) {
    Eigen::MatrixXd next(rows.rows() + 1, p * p);
    next.topRows(rows.rows()) = rows;
    next.row(rows.rows()) = Eigen::Map<const Eigen::RowVectorXd>(ys[m].matrix().data(), p * p);
    const int r = next.row(rows.rows()).cwiseAbs().maxCoeff() == 0.0 ? rank : numerical_rank(next, tol_rank);
    if (r > rank) {
      rows = std::move(next);
      rank = r;
      kept.push_back(static_cast<int>(m));
    }
  }
  return kept;
}

CompressedLedger compress_ledger(const std::vector<FaceLedgerEntry>& entries,
                                 const CopositiveProgram& prog, double tol_rank) {
  std::vector<SymMatrix> ys;
  for (const auto& e : entries) ys.push_back(e.Y);
  const auto kept = independent_prefix_members(ys, tol_rank);
  CompressedLedger out;
  std::size_t next = 0;
  for (std::size_t m = 0; m < entries.size(); ++m) {
    if (next < kept.size() && kept[next] == static_cast<int>(m)) {
      out.core.push_back(entries[m].m);
      ++next;
    } else {
      out.squeezed.push_back(entries[m].m);
    }
  }
  out.s_star = std::max(0, static_cast<int>(out.core.size()) - 1);
  out.ker_dim = ker_dimension(prog, tol_rank);
  if (out.s_star > out.ker_dim) {
    throw LedgerError("compressed ledger has s* = " + std::to_string(out.s_star) +
                      " > dim Ker A = " + std::to_string(out.ker_dim));
  }
  return out;
}

}  // namespace coporeg
