// coporeg - regularization of linear copositive programs
// Licensed under Apache 2.0

#include "coporeg/regularizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "coporeg/errors.hpp"
#include "coporeg/omega_grid.hpp"

namespace coporeg {

std::vector<SimplexPoint> RegularizedProblem::W() const {
  std::vector<SimplexPoint> w;
  for (const auto& r : records) w.push_back(r.tau);
  return w;
}

RegularizedProblem identity_description(const CopositiveProgram& prog, std::vector<double> witness,
                                        double margin) {
  return RegularizedProblem{prog, {}, std::nullopt, std::move(witness), margin, false};
}

namespace {

int state_size(const IterationState& s) {
  int total = static_cast<int>(s.records.size());
  for (const auto& r : s.records) total += r.L.size();
  return total;
}

std::string point_text(const SimplexPoint& t) {
  std::ostringstream os;
  os << '(';
  for (int k = 0; k < t.dim(); ++k) os << (k ? ", " : "") << t[k];
  os << ')';
  return os.str();
}

}  // namespace

UpdateResult update_index_sets(const IterationState& state, const DualCertificate& cert,
                               const Tolerances& tol) {
  if (cert.lambda.size() != state.records.size()) {
    throw InputError("certificate lambda count differs from the record count");
  }
  UpdateResult out{state, false, {}};
  out.state.m = state.m + 1;
  for (std::size_t i = 0; i < state.records.size(); ++i) {
    auto& rec = out.state.records[i];
    const int p = rec.tau.dim();
    for (int k = 0; k < p; ++k) {
      if (!rec.L.contains(k) && cert.lambda[i](k) > tol.mult) rec.L.insert(k);
    }
  }
  for (const auto& ni : cert.new_indices) {
    const auto dup = std::find_if(out.state.records.begin(), out.state.records.end(),
                                  [&](const IndexRecord& r) {
                                    return r.tau.linf_distance(ni.tau) <= tol.support;
                                  });
    if (dup != out.state.records.end()) {
      out.notes.push_back("new index " + point_text(ni.tau) + " duplicates record " +
                          std::to_string(dup - out.state.records.begin() + 1));
      continue;
    }
    out.state.records.push_back({ni.tau, ni.tau.positive_support(tol.support)});
  }
  out.progress = state_size(out.state) > state_size(state);
  if (!out.progress) out.notes.push_back("index sets unchanged");
  return out;
}

bool check_disjointness_condition(const IterationState& old_state, const DualCertificate& cert,
                                  double tol_support) {
  for (const auto& ni : cert.new_indices) {
    const IndexSet zero = ni.tau.zero_support(tol_support);
    for (const auto& r : old_state.records) {
      if (!zero.intersects(r.tau.positive_support(tol_support))) return false;
    }
  }
  return true;
}

RegResult reg_lcop(const CopositiveProgram& prog, const RegOptions& opts) {
  RegResult res;
  const int cap = opts.cap > 0 ? opts.cap : 2 * prog.n() + 2;
  res.cap = cap;
  const auto& tol = opts.sip.tol;
  IterationState state;
  std::vector<FaceLedgerEntry> ledger;

  auto fail = [&](std::string why) {
    res.outcome = Failed{std::move(why), ledger, state};
    return res;
  };

  for (int m = 0; m <= cap; ++m) {
    SipInstance inst{prog, state.records, std::nullopt};
    if (m > 0) {
      std::vector<SimplexPoint> w;
      for (const auto& r : state.records) w.push_back(r.tau);
      inst.omega.emplace(std::move(w), tol.support);
    }
    SipOutcome out;
    try {
      out = solve_sip(inst, opts.sip);
    } catch (const Error& e) {
      res.trace.push_back({m, "error", 0.0, 0, opts.sip.h, 0, true, e.what()});
      return fail("iteration " + std::to_string(m) + ": " + e.what());
    }

    if (auto* nf = std::get_if<NegativeFeasible>(&out)) {
      res.trace.push_back({m, "negative", nf->mu, nf->rounds, nf->h, 0, true,
                           nf->vacuous ? "Omega empty" : ""});
      if (m == 0) {
        res.outcome = Regular{nf->x, nf->margin};
      } else {
        RegularizedProblem rp{prog, state.records, inst.omega, nf->x, nf->margin, nf->vacuous};
        res.outcome = Regularized{std::move(rp), ledger, m};
      }
      return res;
    }
    if (auto* un = std::get_if<Unresolved>(&out)) {
      res.trace.push_back({m, "unresolved", un->mu, un->rounds, opts.sip.h, 0, true, un->reason});
      return fail("iteration " + std::to_string(m) + " unresolved: " + un->reason);
    }

    auto& oz = std::get<OptimalZero>(out);
    const bool cond = check_disjointness_condition(state, oz.certificate, tol.support);
    IterationTrace tr{m, "zero", oz.mu, oz.rounds, oz.h, oz.certificate.new_indices.size(), cond,
                      oz.reduced ? "support reduced" : ""};
    FaceLedgerEntry entry;
    try {
      entry.Y = build_Y(prog, oz.certificate, state.records, tol.cert);
    } catch (const LedgerError& e) {
      res.trace.push_back(tr);
      return fail("iteration " + std::to_string(m) + ": " + e.what());
    }
    UpdateResult up = update_index_sets(state, oz.certificate, tol);
    entry.m = m + 1;
    entry.face = up.state.records;
    entry.prior = state.records;
    entry.certificate = std::move(oz.certificate);
    entry.cond_11star = cond;
    entry.kernel_residual = kernel_residual(prog, entry.Y);
    ledger.push_back(std::move(entry));
    for (const auto& note : up.notes) tr.note += (tr.note.empty() ? "" : "; ") + note;
    res.trace.push_back(tr);
    if (!up.progress) return fail("iteration " + std::to_string(m) + " made no progress");
    state = std::move(up.state);
  }
  return fail("iteration cap " + std::to_string(cap) + " reached");
}

RegularizedProblem one_step_regularize(const CopositiveProgram& prog,
                                       const std::vector<SimplexPoint>& W, const SipOptions& opts,
                                       bool strict) {
  if (W.empty()) throw InputError("W must be nonempty");
  std::vector<IndexRecord> records;
  for (const auto& t : W) {
    if (t.dim() != prog.p()) throw InputError("W point dimension differs from the program");
    records.push_back({t, strict ? t.positive_support(opts.tol.support) : IndexSet{}});
  }
  SipInstance inst{prog, records, OmegaDescriptor(W, opts.tol.support)};
  const SipOutcome out = solve_sip(inst, opts);
  if (const auto* nf = std::get_if<NegativeFeasible>(&out)) {
    return RegularizedProblem{prog, records, inst.omega, nf->x, nf->margin, nf->vacuous};
  }
  if (const auto* oz = std::get_if<OptimalZero>(&out)) {
    std::string blocking = oz->certificate.new_indices.empty()
                               ? std::string("(none)")
                               : point_text(oz->certificate.new_indices.front().tau);
    throw InputError("W is not the full vertex set of conv T_im: blocking index " + blocking);
  }
  throw SolverError("one-step regularization unresolved: " + std::get<Unresolved>(out).reason);
}

std::vector<int> non_immobile(const CopositiveProgram& prog, const std::vector<SimplexPoint>& W,
                              const std::vector<double>& center, double radius, int samples,
                              std::uint64_t seed, double tol) {
  const int n = prog.n();
  std::vector<double> c = center.empty() ? std::vector<double>(static_cast<std::size_t>(n), 0.0) : center;
  if (static_cast<int>(c.size()) != n) throw InputError("center length differs from n");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-radius, radius);
  std::vector<bool> bad(W.size(), false);
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int s = 0; s < samples; ++s) {
    for (int j = 0; j < n; ++j) x[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j)] + u(rng);
    const SymMatrix a = eval_constraint(prog, x);
    if (!std::holds_alternative<Copositive>(is_copositive(a))) continue;
    for (std::size_t w = 0; w < W.size(); ++w) {
      if (std::abs(quad_form(a, W[w])) > tol) bad[w] = true;
    }
  }
  std::vector<int> out;
  for (std::size_t w = 0; w < W.size(); ++w) {
    if (bad[w]) out.push_back(static_cast<int>(w));
  }
  return out;
}

EquivReport feasibility_equiv_sample(const CopositiveProgram& prog, const RegularizedProblem& reg,
                                     int n_samples, std::uint64_t seed, const EquivOptions& opts) {
  const int n = prog.n();
  const int p = prog.p();
  const auto& tol = opts.tol;
  const double band = tol.band;
  std::vector<double> center = opts.center ? *opts.center : reg.witness;
  if (center.empty()) center.assign(static_cast<std::size_t>(n), 0.0);
  if (static_cast<int>(center.size()) != n) throw InputError("center length differs from n");

  std::vector<LinearRow> rows;
  for (auto& r : reg.rows()) {
    if (!r.trivial) rows.push_back(std::move(r));
  }
  const bool use_grid = reg.omega.has_value() && !reg.omega_empty;
  std::optional<SimplexGrid> grid;
  if (use_grid) {
    double h = opts.h;
    auto count = [p](double hh) {
      const int N = static_cast<int>(std::ceil(1.0 / hh - 1e-12));
      double c = 1.0;
      for (int i = 1; i < p; ++i) c = c * (N + i) / i;
      return c;
    };
    while (h < 0.25 && count(h) > static_cast<double>(opts.max_grid_points)) h *= 2.0;
    grid.emplace(*reg.omega, h, tol.feas);
  }

  EquivReport rep;
  std::mt19937_64 rng(seed);
  double radius = opts.radius;
  if (!(radius > 0.0)) {
    double big = 1.0;
    for (double v : center) big = std::max(big, std::abs(v));
    radius = 2.0 * big;
  }
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int s = 0; s < n_samples; ++s) {
    const double r = s % 2 == 0 ? radius : radius / 8.0;
    for (int j = 0; j < n; ++j) x[static_cast<std::size_t>(j)] = center[static_cast<std::size_t>(j)] + r * u(rng);
    ++rep.samples;
    const SymMatrix a = eval_constraint(prog, x);
    const double va = min_quad_over_simplex(a, opts.p_max).value;
    // Feasible points typically sit at exactly zero (immobile indices), so
    // only the slightly negative side of the boundary is ambiguous. A linear
    // row violation d near a zero shows up quadratically (about -d^2 / a_kk),
    // so any genuinely negative value inside the band counts as a tie.
    const bool fa = va >= -tol.cop;
    bool tie = va < -1e-12 * (1.0 + a.max_abs()) && va >= -band;

    double row_margin = std::numeric_limits<double>::infinity();
    for (const auto& r : rows) {
      const double v = r.eval(x);
      row_margin = std::min(row_margin, r.equality ? -std::abs(v) : v);
    }
    if (std::abs(row_margin) <= band) tie = true;
    if (tie) {
      ++rep.ties;
      continue;
    }

    bool fb = false;
    bool decided = true;
    if (row_margin < -band) {
      fb = false;
    } else if (!reg.omega) {
      fb = fa;
    } else if (reg.omega_empty) {
      fb = true;
    } else {
      decided = false;
      const auto r = std::get<OracleResult>(grid->minimize(a));
      if (std::abs(r.value) <= band) {
        tie = true;
      } else if (r.value < -band) {
        fb = false;
        decided = true;
      } else if (r.lower_bound() >= -band) {
        fb = true;
        decided = true;
      } else {
        const OmegaBound bb = bound_quad_over_omega(a, *reg.omega, -band, opts.max_bound_cells, tol.feas);
        if (bb.certified) {
          fb = true;
          decided = true;
        } else if (bb.below) {
          fb = false;
          decided = true;
        }
      }
    }
    if (tie) {
      ++rep.ties;
    } else if (!decided) {
      ++rep.undecided;
    } else if (fa == fb) {
      ++rep.agreements;
      if (fa) ++rep.feasible;
    } else {
      ++rep.disagreements;
      rep.disagreeing.push_back(x);
    }
  }
  return rep;
}

}  // namespace coporeg
