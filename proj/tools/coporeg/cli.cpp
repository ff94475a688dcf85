// coporeg - regularization of linear copositive programs
// Licensed under Apache 2.0

#include "coporeg/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "coporeg/config.hpp"
#include "coporeg/errors.hpp"
#include "coporeg/generator.hpp"
#include "coporeg/ledger.hpp"
#include "coporeg/minimal_face.hpp"
#include "coporeg/problem_io.hpp"
#include "coporeg/regularizer.hpp"
#include "coporeg/report.hpp"

namespace coporeg::cli {

namespace {

using nlohmann::json;

// Shortest round-trip text, always with a decimal point or exponent.
std::string fmt(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, end);
  if (s.find_first_of(".einf") == std::string::npos) s += ".0";
  return s;
}

std::string fmt(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
  return s + "]";
}

std::string fmt_set(const IndexSet& s) {
  std::string out = "{";
  const auto ks = s.to_vector();
  for (std::size_t i = 0; i < ks.size(); ++i) out += (i ? ", " : "") + std::to_string(ks[i] + 1);
  return out + "}";
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw InputError("cannot write " + path);
  f << text << '\n';
}

json rows_json(const RegularizedProblem& rp) {
  json eq = json::array();
  json ineq = json::array();
  for (const auto& r : rp.rows()) {
    json row = {{"i", r.record + 1},
                {"k", r.k + 1},
                {"coeffs", std::vector<double>(r.coeffs.data(), r.coeffs.data() + r.coeffs.size())},
                {"trivial", r.trivial}};
    (r.equality ? eq : ineq).push_back(row);
  }
  return {{"eq_rows", eq}, {"ineq_rows", ineq}};
}

struct Context {
  RunConfig cfg;
  std::ostream& out;
  std::ostream& err;
};

RegularizedProblem regularized_from_run(const CopositiveProgram& prog, const RegResult& res) {
  if (const auto* r = std::get_if<Regular>(&res.outcome)) {
    return identity_description(prog, r->witness, r->margin);
  }
  if (const auto* g = std::get_if<Regularized>(&res.outcome)) return g->problem;
  throw SolverError("regularization failed: " + std::get<Failed>(res.outcome).diagnostics);
}

int run_regularize(Context& cx, const std::string& problem) {
  const auto prog = parse_problem(read_file(problem));
  const auto res = reg_lcop(prog, cx.cfg.reg_options());
  cx.out << summary_text(prog, res);
  if (!cx.cfg.out.empty()) write_file(cx.cfg.out, build_report(prog, res, cx.cfg));
  return std::holds_alternative<Failed>(res.outcome) ? 1 : 0;
}

int run_check_copositive(Context& cx, const std::string& matrix) {
  const auto d = parse_matrix(read_file(matrix));
  const auto verdict = is_copositive(d, cx.cfg.tol.cop, cx.cfg.p_max);
  if (const auto* c = std::get_if<Copositive>(&verdict)) {
    const double m = std::abs(c->margin) <= cx.cfg.tol.cop ? 0.0 : c->margin;
    cx.out << "copositive, margin " << fmt(m) << '\n';
  } else {
    const auto& nc = std::get<NotCopositive>(verdict);
    const auto& w = nc.witness;
    cx.out << "not copositive, witness " << fmt(std::vector<double>(w.coords().begin(), w.coords().end()))
           << ", value " << fmt(nc.value) << '\n';
  }
  return 0;
}

int run_one_step(Context& cx, const std::string& problem, const std::string& wfile, bool strict) {
  const auto prog = parse_problem(read_file(problem));
  const auto W = parse_points(read_file(wfile));
  const auto rp = one_step_regularize(prog, W, cx.cfg.sip_options(), strict);
  cx.out << "witness x = " << fmt(rp.witness) << ", margin " << fmt(rp.margin) << '\n';
  const auto moving = non_immobile(prog, W, rp.witness, 2.0, cx.cfg.samples, cx.cfg.seed);
  for (int w : moving) cx.err << "warning: W point " << w + 1 << " is not immobile on the samples\n";
  if (!cx.cfg.out.empty()) {
    json j = rows_json(rp);
    j["omega"] = {{"W", json::parse(serialize_points(W))["W"]}, {"sigma", rp.omega->sigma()}};
    j["witness"] = rp.witness;
    j["margin"] = std::isfinite(rp.margin) ? json(rp.margin) : json(nullptr);
    j["strict"] = strict;
    write_file(cx.cfg.out, j.dump(2));
  }
  return moving.empty() ? 0 : 1;
}

// The regularized description and its index points, from --W or a full run.
std::pair<RegularizedProblem, std::vector<SimplexPoint>> description(Context& cx, const CopositiveProgram& prog,
                                                                     const std::string& wfile) {
  if (!wfile.empty()) {
    auto W = parse_points(read_file(wfile));
    return {one_step_regularize(prog, W, cx.cfg.sip_options(), false), W};
  }
  const auto res = reg_lcop(prog, cx.cfg.reg_options());
  auto rp = regularized_from_run(prog, res);
  auto W = rp.W();
  return {std::move(rp), std::move(W)};
}

int run_minimal_face(Context& cx, const std::string& problem, const std::string& wfile) {
  const auto prog = parse_problem(read_file(problem));
  auto [rp, W] = description(cx, prog, wfile);
  if (W.empty()) {
    cx.out << "Slater holds; the minimal face is the whole copositive cone\n";
    return 0;
  }
  MinimalFaceOptions mo;
  mo.tol = cx.cfg.tol;
  mo.R = cx.cfg.R;
  mo.h = cx.cfg.h;
  mo.p_max = cx.cfg.p_max;
  const auto desc = minimal_face(prog, W, rp, mo);
  json vs = json::array();
  for (std::size_t j = 0; j < W.size(); ++j) {
    cx.out << "t(" << j + 1 << ") = "
           << fmt(std::vector<double>(W[j].coords().begin(), W[j].coords().end())) << ", M = "
           << fmt_set(desc.M[j]) << '\n';
    json m = json::array();
    for (int k : desc.M[j].to_vector()) m.push_back(k + 1);
    vs.push_back({{"t", std::vector<double>(W[j].coords().begin(), W[j].coords().end())}, {"M", m}});
  }
  for (const auto& n : desc.notes) cx.out << "note: " << n << '\n';
  const auto cc = cross_check(desc, cx.cfg.samples, cx.cfg.seed);
  cx.out << "predicates agree on " << cc.samples << " samples (" << cc.members << " in the face)\n";
  if (!cx.cfg.out.empty()) {
    write_file(cx.cfg.out, json{{"vertices", vs}, {"notes", desc.notes}, {"samples", cc.samples}}.dump(2));
  }
  return 0;
}

int run_verify_ledger(Context& cx, const std::string& problem, const std::string& report) {
  const auto prog = parse_problem(read_file(problem));
  std::vector<FaceLedgerEntry> ledger;
  if (!report.empty()) {
    ledger = parse_report(read_file(report)).ledger;
  } else {
    const auto res = reg_lcop(prog, cx.cfg.reg_options());
    if (const auto* g = std::get_if<Regularized>(&res.outcome)) ledger = g->ledger;
    else if (const auto* f = std::get_if<Failed>(&res.outcome)) ledger = f->ledger;
  }
  VerifyOptions vo;
  vo.tol = cx.cfg.tol;
  vo.samples = std::min(cx.cfg.samples, 200);
  vo.seed = cx.cfg.seed;
  vo.p_max = cx.cfg.p_max;
  const auto rep = verify_ledger(ledger, prog, vo);
  for (const auto& c : rep.checks) {
    cx.out << "m=" << c.m << " " << c.condition << ": " << (c.ok ? "ok" : "VIOLATED") << " (worst "
           << c.worst << ", tested " << c.tested << ") " << c.detail << '\n';
  }
  cx.out << (ledger.empty() ? "empty ledger: nothing to check\n" : "");
  cx.out << rep.violations() << " violation(s)\n";
  return rep.ok() ? 0 : 1;
}

int run_equiv_check(Context& cx, const std::string& problem, const std::string& wfile) {
  const auto prog = parse_problem(read_file(problem));
  auto [rp, W] = description(cx, prog, wfile);
  EquivOptions eo;
  eo.tol = cx.cfg.tol;
  eo.h = cx.cfg.h;
  eo.p_max = cx.cfg.p_max;
  const auto rep = feasibility_equiv_sample(prog, rp, cx.cfg.samples, cx.cfg.seed, eo);
  cx.out << rep.samples << " samples: " << rep.agreements << " agree (" << rep.feasible << " feasible), "
         << rep.disagreements << " disagree, " << rep.ties << " ties, " << rep.undecided << " undecided\n";
  for (const auto& x : rep.disagreeing) cx.out << "  disagreement at x = " << fmt(x) << '\n';
  return rep.disagreements == 0 ? 0 : 1;
}

int run_generate(Context& cx, int p, int n, const std::string& planted) {
  std::vector<SimplexPoint> pts;
  if (!planted.empty()) pts = parse_points(read_file(planted));
  const auto prog = generate_instance(cx.cfg.seed, p, n, pts, cx.cfg.p_max);
  const auto text = serialize_problem(prog);
  if (cx.cfg.out.empty()) cx.out << text << '\n';
  else write_file(cx.cfg.out, text);
  return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Context cx{RunConfig{}, out, err};
  try {
    cx.cfg = config_from_environment();
  } catch (const Error& e) {
    err << "error: COPOREG_CONFIG: " << e.what() << '\n';
    return 1;
  }
  auto& cfg = cx.cfg;

  CLI::App app{"Regularization of linear copositive programs that fail Slater", "coporeg"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print this help");
  app.set_help_all_flag("--help-all");

  std::string problem;
  std::string matrix;
  std::string wfile;
  std::string report;
  std::string planted;
  bool strict = false;
  int gen_p = 3;
  int gen_n = 1;

  auto common = [&](CLI::App* sc) {
    sc->add_option("--out,-o", cfg.out, "output file");
    sc->add_option("--h", cfg.h, "grid resolution over Omega");
    sc->add_option("--R", cfg.R, "box bound on x");
    sc->add_option("--cap", cfg.cap, "iteration cap (0: 2n + 2)");
    sc->add_option("--seed", cfg.seed, "random seed");
    sc->add_option("--samples", cfg.samples, "sample count");
    sc->add_option("--p-max", cfg.p_max, "largest p for exact support enumeration");
    sc->add_option("--tol-feas", cfg.tol.feas);
    sc->add_option("--tol-support", cfg.tol.support);
    sc->add_option("--tol-rank", cfg.tol.rank);
    sc->add_option("--tol-cop", cfg.tol.cop);
    sc->add_option("--tol-strict", cfg.tol.strict);
    sc->add_option("--tol-lp", cfg.tol.lp);
    sc->add_option("--tol-mult", cfg.tol.mult);
    sc->add_option("--tol-neg", cfg.tol.neg);
    sc->add_option("--tol-zero", cfg.tol.zero);
    sc->add_option("--tol-cert", cfg.tol.cert);
    sc->add_option("--tol-band", cfg.tol.band);
    sc->add_flag("-v,--verbose", cfg.verbosity, "more output");
  };

  auto* reg = app.add_subcommand("regularize", "run the facial-reduction loop and write a report");
  reg->add_option("--problem,-p", problem, "problem file")->required();
  common(reg);

  auto* cop = app.add_subcommand("check-copositive", "decide copositivity of a matrix");
  cop->add_option("--matrix,-m", matrix, "matrix file")->required();
  common(cop);

  auto* one = app.add_subcommand("one-step", "regularize with a given set of immobile points");
  one->add_option("--problem,-p", problem, "problem file")->required();
  one->add_option("--W", wfile, "point-set file")->required();
  one->add_flag("--strict", strict, "equalities on the positive support");
  common(one);

  auto* mf = app.add_subcommand("minimal-face", "describe the minimal face");
  mf->add_option("--problem,-p", problem, "problem file")->required();
  mf->add_option("--W", wfile, "vertex set of the immobile hull (default: from a full run)");
  common(mf);

  auto* vl = app.add_subcommand("verify-ledger", "check the facial-reduction ledger");
  vl->add_option("--problem,-p", problem, "problem file")->required();
  vl->add_option("--report,-r", report, "report from a previous run (default: run now)");
  common(vl);

  auto* eq = app.add_subcommand("equiv-check", "compare feasibility of both descriptions on samples");
  eq->add_option("--problem,-p", problem, "problem file")->required();
  eq->add_option("--W", wfile, "use the one-step description over these points");
  common(eq);

  auto* gen = app.add_subcommand("generate", "write a random instance with planted immobile points");
  gen->add_option("--p", gen_p, "matrix dimension");
  gen->add_option("--n", gen_n, "number of variables");
  gen->add_option("--planted", planted, "point-set file");
  common(gen);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    cfg.validate();
    if (reg->parsed()) return run_regularize(cx, problem);
    if (cop->parsed()) return run_check_copositive(cx, matrix);
    if (one->parsed()) return run_one_step(cx, problem, wfile, strict);
    if (mf->parsed()) return run_minimal_face(cx, problem, wfile);
    if (vl->parsed()) return run_verify_ledger(cx, problem, report);
    if (eq->parsed()) return run_equiv_check(cx, problem, wfile);
    if (gen->parsed()) return run_generate(cx, gen_p, gen_n, planted);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

int cli_main(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace coporeg::cli
