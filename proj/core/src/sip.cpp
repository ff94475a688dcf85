// coporeg - regularization of linear copositive programs
// Licensed under Apache 2.0

#include "coporeg/sip.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "coporeg/errors.hpp"

namespace coporeg {

double LinearRow::eval(std::span<const double> x) const {
  double v = coeffs(0);
  for (std::size_t j = 0; j < x.size(); ++j) v += coeffs(static_cast<Eigen::Index>(j) + 1) * x[j];
  return v;
}

std::vector<LinearRow> linear_rows(const CopositiveProgram& prog,
                                   const std::vector<IndexRecord>& records) {
  const int n = prog.n();
  const int p = prog.p();
  std::vector<LinearRow> out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records[i];
    if (rec.tau.dim() != p) throw InputError("record dimension differs from the program");
    Eigen::MatrixXd at(p, n + 1);
    for (int j = 0; j <= n; ++j) at.col(j) = prog.A(j).matrix() * rec.tau.vec();
    for (int k = 0; k < p; ++k) {
      Eigen::VectorXd c = at.row(k).transpose();
      const bool trivial = c.cwiseAbs().maxCoeff() <= 1e-13;
      out.push_back({static_cast<int>(i), k, rec.L.contains(k), std::move(c), trivial});
    }
  }
  return out;
}

double certificate_residual(const CopositiveProgram& prog, const std::vector<IndexRecord>& records,
                            const DualCertificate& cert) {
  if (cert.lambda.size() != records.size()) {
    throw InputError("certificate lambda count differs from the record count");
  }
  double worst = 0.0;
  for (int j = 0; j <= prog.n(); ++j) {
    const SymMatrix& a = prog.A(j);
    double s = 0.0;
    for (const auto& ni : cert.new_indices) s += ni.gamma * quad_form(a, ni.tau);
    for (std::size_t i = 0; i < records.size(); ++i) {
      s += 2.0 * cert.lambda[i].dot(a.matrix() * records[i].tau.vec());
    }
    worst = std::max(worst, std::abs(s));
  }
  return worst;
}

SipMaster::SipMaster(const SipInstance& inst, double R, double mu_floor)
    : inst_(&inst), r_(R), mu_floor_(mu_floor) {
  for (auto& row : linear_rows(inst.prog, inst.records)) {
    if (!row.trivial) rows_.push_back(std::move(row));
  }
}

bool SipMaster::add_cut(const SimplexPoint& t) {
  for (const auto& c : cuts_) {
    if (c.linf_distance(t) <= 1e-12) return false;
  }
  const int n = inst_->prog.n();
  Eigen::VectorXd q(n + 1);
  for (int j = 0; j <= n; ++j) q(j) = quad_form(inst_->prog.A(j), t);
  cuts_.push_back(t);
  cut_coeffs_.push_back(std::move(q));
  return true;
}

std::vector<lp::Row> SipMaster::lp_rows() const {
  const int n = inst_->prog.n();
  const auto nz = static_cast<std::size_t>(n + 1);
  std::vector<lp::Row> rows;
  rows.reserve(cuts_.size() + rows_.size() + nz + static_cast<std::size_t>(n));
  for (const auto& q : cut_coeffs_) {
    std::vector<double> c(nz);
    for (int j = 0; j < n; ++j) c[static_cast<std::size_t>(j)] = q(j + 1);
    c[static_cast<std::size_t>(n)] = 1.0;
    rows.push_back({std::move(c), lp::Relation::GreaterEqual, -q(0)});
  }
  for (const auto& r : rows_) {
    std::vector<double> c(nz, 0.0);
    for (int j = 0; j < n; ++j) c[static_cast<std::size_t>(j)] = r.coeffs(j + 1);
    rows.push_back({std::move(c), r.equality ? lp::Relation::Equal : lp::Relation::GreaterEqual,
                    -r.coeffs(0)});
  }
  for (int j = 0; j < n; ++j) {
    std::vector<double> lo(nz, 0.0);
    std::vector<double> hi(nz, 0.0);
    lo[static_cast<std::size_t>(j)] = 1.0;
    hi[static_cast<std::size_t>(j)] = -1.0;
    rows.push_back({std::move(lo), lp::Relation::GreaterEqual, -r_});
    rows.push_back({std::move(hi), lp::Relation::GreaterEqual, -r_});
  }
  std::vector<double> mu(nz, 0.0);
  mu[static_cast<std::size_t>(n)] = 1.0;
  rows.push_back({std::move(mu), lp::Relation::GreaterEqual, mu_floor_});
  return rows;
}

lp::LpSolution SipMaster::solve(const lp::LpOptions& opts) const {
  const int n = inst_->prog.n();
  std::vector<double> c(static_cast<std::size_t>(n + 1), 0.0);
  c[static_cast<std::size_t>(n)] = 1.0;
  auto sol = lp::solve_lp_by_dual(c, lp_rows(), opts);
  if (sol.status != lp::LpStatus::Optimal) {
    throw SolverError(std::string("master LP is ") + lp::to_string(sol.status) +
                      " (linear rows inconsistent within the box?)");
  }
  return sol;
}

namespace {

DualCertificate assemble(const std::vector<SimplexPoint>& cuts, const std::vector<double>& gamma,
                         const std::vector<LinearRow>& rows, const std::vector<double>& nu,
                         const SipInstance& inst, double tol_mult) {
  DualCertificate cert;
  for (std::size_t c = 0; c < cuts.size(); ++c) {
    if (gamma[c] > tol_mult) cert.new_indices.push_back({cuts[c], gamma[c]});
  }
  cert.lambda.assign(inst.records.size(), Eigen::VectorXd::Zero(inst.prog.p()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    double v = nu[r];
    if (std::abs(v) <= tol_mult) v = 0.0;
    cert.lambda[static_cast<std::size_t>(rows[r].record)](rows[r].k) = 0.5 * v;
  }
  return cert;
}

void normalize_gamma(DualCertificate& cert) {
  double s = 0.0;
  for (const auto& ni : cert.new_indices) s += ni.gamma;
  if (!(s > 0.0)) return;
  for (auto& ni : cert.new_indices) ni.gamma /= s;
  for (auto& l : cert.lambda) l /= s;
}

std::vector<double> head(const std::vector<double>& v, int n) {
  return {v.begin(), v.begin() + n};
}

// Oracle over the SIP domain: exact stationary points on T when p allows,
// the certified grid otherwise.
class Separator {
 public:
  Separator(const SipInstance& inst, double h, int p_max) : p_max_(p_max) {
    const int p = inst.prog.p();
    if (inst.omega) {
      grid_.emplace(*inst.omega, h);
    } else if (p > p_max) {
      grid_.emplace(p, h);
    }
    for (int k = 0; k < p; ++k) {
      auto v = SimplexPoint::vertex(p, k);
      if (!inst.omega || inst.omega->contains(v)) initial_.push_back(std::move(v));
    }
  }

  bool uses_grid() const { return grid_.has_value(); }
  bool empty() const { return grid_ && grid_->empty_domain(); }
  const std::vector<SimplexPoint>& initial() const { return initial_; }

  std::vector<std::pair<SimplexPoint, double>> below(const SymMatrix& d, double thr,
                                                     int max_count) const {
    if (grid_) return grid_->below(d, thr, max_count);
    std::vector<std::pair<SimplexPoint, double>> out;
    for (auto& sp : stationary_points(d, p_max_)) {
      if (sp.value < thr) out.emplace_back(std::move(sp.point), sp.value);
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& a, const auto& b) { return a.second < b.second; });
    if (out.size() > static_cast<std::size_t>(max_count)) {
      out.erase(out.begin() + max_count, out.end());
    }
    return out;
  }

  // Certified lower bound of t'Dt over the domain.
  double lower_bound(const SymMatrix& d) const {
    if (grid_) {
      auto r = grid_->minimize(d);
      if (std::holds_alternative<EmptyIndexSet>(r)) return std::numeric_limits<double>::infinity();
      return std::get<OracleResult>(r).lower_bound();
    }
    return min_quad_over_simplex(d, p_max_).value;
  }

 private:
  int p_max_;
  std::optional<SimplexGrid> grid_;
  std::vector<SimplexPoint> initial_;
};

struct PhaseA {
  lp::LpSolution sol;
  std::vector<double> x;
  double mu = 0.0;
  bool converged = false;  // no violated index left
  bool early = false;      // negative with a small enough violation
  int rounds = 0;
};

PhaseA run_master(const SipInstance& inst, SipMaster& master, const Separator& sep,
                  const SipOptions& opts) {
  const auto& tol = opts.tol;
  const int n = inst.prog.n();
  PhaseA out;
  for (;;) {
    out.sol = master.solve();
    out.x = head(out.sol.primal, n);
    out.mu = out.sol.primal[static_cast<std::size_t>(n)];
    if (out.mu >= -tol.zero) return out;
    const SymMatrix d = eval_constraint(inst.prog, out.x);
    const auto cands = sep.below(d, -out.mu - tol.feas, opts.cuts_per_round);
    if (cands.empty()) {
      out.converged = true;
      return out;
    }
    const double violation = -out.mu - cands.front().second;
    if (out.mu <= -tol.neg && violation <= -out.mu / 8.0) {
      out.early = true;
      return out;
    }
    bool added = false;
    for (const auto& [t, v] : cands) added = master.add_cut(t) || added;
    if (!added || ++out.rounds >= opts.max_rounds) return out;
  }
}

bool rows_hold(const std::vector<LinearRow>& rows, std::span<const double> x, double tol) {
  for (const auto& r : rows) {
    const double v = r.eval(x);
    const double scale = 1.0 + r.coeffs.cwiseAbs().maxCoeff();
    if (r.equality ? std::abs(v) > tol * scale : v < -tol * scale) return false;
  }
  return true;
}

// Smallest-l1 x with t'A(x)t >= 0.75|mu| on the cut points and all rows,
// refined by separation until no domain point drops below 0.65|mu|; the
// result counts when the certified bound reaches 0.5|mu|.
std::optional<NegativeFeasible> find_witness(const SipInstance& inst, const SipMaster& master,
                                             const Separator& sep, double mu,
                                             const SipOptions& opts) {
  const int n = inst.prog.n();
  const double target = 0.75 * std::abs(mu);
  const double accept = 0.65 * std::abs(mu);
  const double need = 0.5 * std::abs(mu);
  std::vector<SimplexPoint> cuts = master.cuts();
  const auto& rows = master.active_rows();
  const auto nz = static_cast<std::size_t>(2 * n);

  std::vector<double> c(nz, 0.0);
  std::fill(c.begin() + n, c.end(), 1.0);
  std::vector<double> x;
  int rounds = 0;
  auto is_dup = [&](const SimplexPoint& t) {
    return std::any_of(cuts.begin(), cuts.end(),
                       [&](const SimplexPoint& s) { return s.linf_distance(t) <= 1e-12; });
  };
  for (int attempt = 0; attempt < 16; ++attempt) {
    for (;; ++rounds) {
      std::vector<lp::Row> lrows;
      for (const auto& t : cuts) {
        std::vector<double> a(nz, 0.0);
        for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(j)] = quad_form(inst.prog.A(j + 1), t);
        lrows.push_back({std::move(a), lp::Relation::GreaterEqual,
                         target - quad_form(inst.prog.A(0), t)});
      }
      for (const auto& r : rows) {
        std::vector<double> a(nz, 0.0);
        for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(j)] = r.coeffs(j + 1);
        lrows.push_back({std::move(a), r.equality ? lp::Relation::Equal : lp::Relation::GreaterEqual,
                         -r.coeffs(0)});
      }
      for (int j = 0; j < n; ++j) {
        std::vector<double> up(nz, 0.0), dn(nz, 0.0), lo(nz, 0.0), hi(nz, 0.0);
        const auto ju = static_cast<std::size_t>(j);
        const auto uu = static_cast<std::size_t>(n + j);
        up[uu] = 1.0; up[ju] = -1.0;
        dn[uu] = 1.0; dn[ju] = 1.0;
        lo[ju] = 1.0;
        hi[ju] = -1.0;
        lrows.push_back({std::move(up), lp::Relation::GreaterEqual, 0.0});
        lrows.push_back({std::move(dn), lp::Relation::GreaterEqual, 0.0});
        lrows.push_back({std::move(lo), lp::Relation::GreaterEqual, -master.R()});
        lrows.push_back({std::move(hi), lp::Relation::GreaterEqual, -master.R()});
      }
      const auto sol = lp::solve_lp_by_dual(c, lrows);
      if (sol.status != lp::LpStatus::Optimal) return std::nullopt;
      x = head(sol.primal, n);
      if (rounds >= opts.max_rounds) break;
      const auto cands = sep.below(eval_constraint(inst.prog, x), accept, opts.cuts_per_round);
      bool added = false;
      for (const auto& [t, v] : cands) {
        if (!is_dup(t)) {
          cuts.push_back(t);
          added = true;
        }
      }
      if (!added) break;
    }
    for (double& v : x) {
      if (std::abs(v) < 1e-13) v = 0.0;
    }
    if (!rows_hold(rows, x, opts.tol.feas)) return std::nullopt;
    const SymMatrix ax = eval_constraint(inst.prog, x);
    const double lb = sep.lower_bound(ax);
    if (lb >= need - opts.tol.feas) return NegativeFeasible{x, -need, lb, false, opts.h, rounds};
    if (!inst.omega) return std::nullopt;
    // The grid bound is too coarse here; settle the sign adaptively.
    const OmegaBound bb = bound_quad_over_omega(ax, *inst.omega, need, opts.max_bound_cells, opts.tol.feas);
    if (bb.certified) return NegativeFeasible{x, -need, bb.lower_bound, false, opts.h, rounds};
    if (!bb.below || is_dup(*bb.below)) return std::nullopt;
    cuts.push_back(*bb.below);
  }
  return std::nullopt;
}

void check_origin(const SipInstance& inst, const SipMaster& master, double tol) {
  const std::vector<double> zero(static_cast<std::size_t>(inst.prog.n()), 0.0);
  for (const auto& t : master.cuts()) {
    if (quad_form(inst.prog.A(0), t) < -tol) {
      throw SolverError("runtime check failed: (x, mu) = (0, 0) violates a cut although A_0 is "
                        "declared copositive");
    }
  }
  if (!rows_hold(master.active_rows(), zero, tol)) {
    throw SolverError("runtime check failed: x = 0 violates a linear row although A_0 is "
                      "declared copositive");
  }
}

}  // namespace

DualCertificate extract_certificate(const lp::LpSolution& master, const SipMaster& m,
                                    const SipInstance& inst, const SipOptions& opts,
                                    bool normalize, bool* reduced) {
  const auto& tol = opts.tol;
  const int n = inst.prog.n();
  const auto& cuts = m.cuts();
  const auto& rows = m.active_rows();
  const std::size_t nc = cuts.size();
  if (reduced) *reduced = false;

  std::vector<double> gamma(master.dual.begin(), master.dual.begin() + static_cast<long>(nc));
  std::vector<double> nu(master.dual.begin() + static_cast<long>(nc),
                         master.dual.begin() + static_cast<long>(nc + rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (!rows[r].equality && nu[r] < 0.0 && nu[r] >= -tol.mult) nu[r] = 0.0;
  }
  DualCertificate cert = assemble(cuts, gamma, rows, nu, inst, tol.mult);
  if (normalize) normalize_gamma(cert);
  cert.residual = certificate_residual(inst.prog, inst.records, cert);
  const auto count = static_cast<int>(cert.new_indices.size());
  if (cert.residual <= tol.cert && count >= 1 && count <= n + 1) return cert;

  // Support reduction: a vertex of {gamma >= 0, nu, stationarity for
  // j = 1..n, sum gamma = 1} over the active cuts and rows has at most n+1
  // nonzeros. Earlier cuts are preferred.
  const std::vector<double> x = head(master.primal, n);
  const double mu = master.primal[static_cast<std::size_t>(n)];
  double xs = 1.0;
  for (double v : x) xs = std::max(xs, std::abs(v));
  const double act = 1e-6 * xs;

  std::vector<std::size_t> ac;
  std::vector<std::size_t> ar;
  const SymMatrix ax = eval_constraint(inst.prog, x);
  for (std::size_t c = 0; c < nc; ++c) {
    const double q = quad_form(ax, cuts[c]);
    if (std::abs(q + mu) <= act) ac.push_back(c);
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].equality || std::abs(rows[r].eval(x)) <= act) ar.push_back(r);
  }
  const int nv = static_cast<int>(ac.size() + ar.size());
  lp::LinearProgram red(nv);
  for (std::size_t a = 0; a < ac.size(); ++a) red.objective[a] = 1.0 + 1e-3 * static_cast<double>(a);
  for (std::size_t b = 0; b < ar.size(); ++b) {
    if (rows[ar[b]].equality) red.lower[ac.size() + b] = -lp::kInf;
  }
  for (int j = 1; j <= n; ++j) {
    std::vector<double> coef(static_cast<std::size_t>(nv), 0.0);
    for (std::size_t a = 0; a < ac.size(); ++a) coef[a] = quad_form(inst.prog.A(j), cuts[ac[a]]);
    for (std::size_t b = 0; b < ar.size(); ++b) coef[ac.size() + b] = rows[ar[b]].coeffs(j);
    red.add_row(std::move(coef), lp::Relation::Equal, 0.0);
  }
  std::vector<double> sum(static_cast<std::size_t>(nv), 0.0);
  std::fill_n(sum.begin(), ac.size(), 1.0);
  red.add_row(std::move(sum), lp::Relation::Equal, 1.0);
  const auto rs = lp::solve_lp(red);
  if (rs.status != lp::LpStatus::Optimal) {
    throw CertificateError("no stationary multipliers over the active cuts (raw residual " +
                               std::to_string(cert.residual) + ")",
                           cert.residual);
  }
  std::vector<double> g2(nc, 0.0);
  std::vector<double> n2(rows.size(), 0.0);
  for (std::size_t a = 0; a < ac.size(); ++a) g2[ac[a]] = rs.primal[a];
  for (std::size_t b = 0; b < ar.size(); ++b) n2[ar[b]] = rs.primal[ac.size() + b];
  DualCertificate red_cert = assemble(cuts, g2, rows, n2, inst, tol.mult);
  if (normalize) normalize_gamma(red_cert);
  red_cert.residual = certificate_residual(inst.prog, inst.records, red_cert);
  const auto rc = static_cast<int>(red_cert.new_indices.size());
  if (red_cert.residual > tol.cert || rc < 1 || rc > n + 1) {
    throw CertificateError("certificate stationarity residual " +
                               std::to_string(red_cert.residual) + " exceeds tolerance",
                           red_cert.residual);
  }
  if (reduced) *reduced = true;
  return red_cert;
}

SipOutcome solve_sip(const SipInstance& inst, const SipOptions& opts) {
  const auto& tol = opts.tol;
  const int n = inst.prog.n();
  const int p = inst.prog.p();
  for (const auto& r : inst.records) {
    if (r.tau.dim() != p) throw InputError("record dimension differs from the program");
  }
  if (inst.omega && inst.omega->dim() != p) throw InputError("Omega dimension differs from the program");

  if (inst.omega && inst.omega->is_empty(tol.feas)) {
    // Only the linear rows remain; mu can be any negative number.
    SipMaster master(inst, opts.R, opts.mu_floor);
    const auto nz = static_cast<std::size_t>(2 * n);
    std::vector<lp::Row> lrows;
    for (const auto& r : master.active_rows()) {
      std::vector<double> a(nz, 0.0);
      for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(j)] = r.coeffs(j + 1);
      lrows.push_back({std::move(a), r.equality ? lp::Relation::Equal : lp::Relation::GreaterEqual,
                       -r.coeffs(0)});
    }
    for (int j = 0; j < n; ++j) {
      std::vector<double> up(nz, 0.0), dn(nz, 0.0);
      up[static_cast<std::size_t>(n + j)] = 1.0; up[static_cast<std::size_t>(j)] = -1.0;
      dn[static_cast<std::size_t>(n + j)] = 1.0; dn[static_cast<std::size_t>(j)] = 1.0;
      lrows.push_back({std::move(up), lp::Relation::GreaterEqual, 0.0});
      lrows.push_back({std::move(dn), lp::Relation::GreaterEqual, 0.0});
    }
    std::vector<double> c(nz, 0.0);
    std::fill(c.begin() + n, c.end(), 1.0);
    const auto sol = lp::solve_lp_by_dual(c, lrows);
    if (sol.status != lp::LpStatus::Optimal) {
      return Unresolved{"Omega is empty and the linear rows are infeasible", 0.0, 0};
    }
    return NegativeFeasible{head(sol.primal, n), -1.0, std::numeric_limits<double>::infinity(), true,
                            opts.h, 0};
  }

  // Number of compositions of ceil(1/h) into p parts.
  auto grid_count = [p](double hh) {
    const int N = static_cast<int>(std::ceil(1.0 / hh - 1e-12));
    double c = 1.0;
    for (int i = 1; i < p; ++i) c = c * (N + i) / i;
    return c;
  };
  double h = opts.h;
  if (inst.omega) {
    while (h < 0.25 && grid_count(h) > opts.max_grid_points) h *= 2.0;
  }
  std::string last = "no rounds run";
  double last_mu = 0.0;
  int total_rounds = 0;
  for (int refine = 0; refine <= opts.refinement_rounds; ++refine) {
    const Separator sep(inst, h, opts.p_max);
    double R = opts.R;
    bool retry_box = true;
    for (int growth = 0; retry_box && growth <= opts.box_growths; ++growth) {
      retry_box = false;
      SipMaster master(inst, R, opts.mu_floor);
      for (const auto& v : sep.initial()) master.add_cut(v);
      const PhaseA pa = run_master(inst, master, sep, opts);
      total_rounds += pa.rounds;
      last_mu = pa.mu;
      if (opts.a0_copositive) check_origin(inst, master, tol.feas);

      if (pa.mu > tol.zero) {
        return Unresolved{"master optimum is positive: the feasible set is empty", pa.mu,
                          total_rounds};
      }
      if (pa.mu >= -tol.zero) {
        try {
          bool reduced = false;
          DualCertificate cert =
              extract_certificate(pa.sol, master, inst, opts, inst.records.empty(), &reduced);
          return OptimalZero{std::move(cert), pa.x, pa.mu, h, R, total_rounds,
                             static_cast<int>(master.cuts().size()), reduced};
        } catch (const CertificateError& e) {
          const bool at_box = std::any_of(pa.x.begin(), pa.x.end(),
                                          [&](double v) { return std::abs(v) >= R * (1 - 1e-9); });
          last = e.what();
          if (at_box) {
            R *= 10.0;
            retry_box = true;
            continue;
          }
          return Unresolved{std::string("certificate failed: ") + e.what(), pa.mu, total_rounds};
        }
      }
      if (pa.mu <= -tol.neg && (pa.converged || pa.early)) {
        if (auto w = find_witness(inst, master, sep, pa.mu, opts)) {
          w->h = h;
          w->rounds += total_rounds;
          return *w;
        }
        last = "witness not certified at h = " + std::to_string(h);
      } else if (!pa.converged) {
        last = "cutting-plane loop stalled at mu = " + std::to_string(pa.mu);
      } else {
        last = "master optimum " + std::to_string(pa.mu) + " lies between the zero and negative thresholds";
      }
    }
    if (!sep.uses_grid() || grid_count(h / 2.0) > opts.max_grid_points) break;
    h /= 2.0;
  }
  return Unresolved{last, last_mu, total_rounds};
}

}  // namespace coporeg
