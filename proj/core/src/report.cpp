// coporeg - regularization of linear copositive programs
// Licensed under Apache 2.0

#include "coporeg/report.hpp"

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "coporeg/errors.hpp"

namespace coporeg {

namespace {

using nlohmann::json;

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json point_json(const SimplexPoint& t) {
  return json(std::vector<double>(t.coords().begin(), t.coords().end()));
}

json set_json(const IndexSet& s) {
  json a = json::array();
  for (int k : s.to_vector()) a.push_back(k + 1);
  return a;
}

json records_json(const std::vector<IndexRecord>& recs) {
  json a = json::array();
  for (const auto& r : recs) a.push_back({{"tau", point_json(r.tau)}, {"L", set_json(r.L)}});
  return a;
}

json rows_json(const std::vector<LinearRow>& rows, bool equality) {
  json a = json::array();
  for (const auto& r : rows) {
    if (r.equality != equality) continue;
    a.push_back({{"i", r.record + 1},
                 {"k", r.k + 1},
                 {"coeffs", std::vector<double>(r.coeffs.data(), r.coeffs.data() + r.coeffs.size())},
                 {"trivial", r.trivial}});
  }
  return a;
}

json entry_json(const CopositiveProgram& prog, const FaceLedgerEntry& e) {
  json j;
  j["m"] = e.m;
  json tau = json::array();
  json gamma = json::array();
  for (const auto& ni : e.certificate.new_indices) {
    tau.push_back(point_json(ni.tau));
    gamma.push_back(ni.gamma);
  }
  j["tau"] = tau;
  j["gamma"] = gamma;
  json lam = json::array();
  for (const auto& l : e.certificate.lambda) lam.push_back(std::vector<double>(l.data(), l.data() + l.size()));
  j["lambda"] = lam;
  json L = json::array();
  for (const auto& r : e.face) L.push_back(set_json(r.L));
  j["L"] = L;
  j["records"] = records_json(e.face);
  j["prior"] = records_json(e.prior);
  j["Y"] = e.Y.rows();
  j["cond_11star"] = e.cond_11star;
  j["kernel_residual"] = e.kernel_residual;
  j["certificate_residual"] = certificate_residual(prog, e.prior, e.certificate);
  return j;
}

json compressed_json(const CopositiveProgram& prog, const std::vector<FaceLedgerEntry>& ledger,
                     double tol_rank) {
  try {
    const auto c = compress_ledger(ledger, prog, tol_rank);
    return {{"core", c.core}, {"squeezed", c.squeezed}, {"s_star", c.s_star}, {"ker_dim", c.ker_dim}};
  } catch (const LedgerError& e) {
    return {{"error", e.what()}};
  }
}

[[noreturn]] void schema_fail(const std::string& path, const std::string& what) {
  throw ParseError("report field " + path + ": " + what);
}

const json& need(const json& j, const char* key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) schema_fail(path + "." + key, "missing field");
  return j.at(key);
}

void need_array(const json& j, const std::string& path) {
  if (!j.is_array()) schema_fail(path, "expected an array");
}

void need_number(const json& j, const std::string& path) {
  if (!j.is_number()) schema_fail(path, "expected a number");
}

std::vector<IndexRecord> parse_records(const json& a) {
  std::vector<IndexRecord> out;
  for (const auto& r : a) {
    IndexSet L;
    for (int k : r.at("L")) L.insert(k - 1);
    out.push_back({SimplexPoint(r.at("tau").get<std::vector<double>>()), L});
  }
  return out;
}

}  // namespace

std::string build_report(const CopositiveProgram& prog, const RegResult& res, const RunConfig& cfg) {
  json j;
  j["n"] = prog.n();
  j["p"] = prog.p();
  const std::vector<FaceLedgerEntry>* ledger = nullptr;
  static const std::vector<FaceLedgerEntry> kNone;
  j["regularized"] = nullptr;
  j["diagnostics"] = nullptr;
  if (const auto* r = std::get_if<Regular>(&res.outcome)) {
    j["status"] = "regular";
    j["m_star"] = 0;
    j["witness"] = r->witness;
    j["margin"] = num(r->margin);
    ledger = &kNone;
  } else if (const auto* g = std::get_if<Regularized>(&res.outcome)) {
    j["status"] = "regularized";
    j["m_star"] = g->m_star;
    const auto& rp = g->problem;
    j["witness"] = rp.witness;
    j["margin"] = num(rp.margin);
    const auto rows = rp.rows();
    json omega = nullptr;
    if (rp.omega) {
      json W = json::array();
      for (const auto& t : rp.omega->points()) W.push_back(point_json(t));
      omega = {{"W", W}, {"sigma", rp.omega->sigma()}};
    }
    j["regularized"] = {{"eq_rows", rows_json(rows, true)},
                        {"ineq_rows", rows_json(rows, false)},
                        {"omega", omega},
                        {"omega_empty", rp.omega_empty},
                        {"witness", rp.witness},
                        {"margin", num(rp.margin)}};
    ledger = &g->ledger;
  } else {
    const auto& f = std::get<Failed>(res.outcome);
    j["status"] = "failed";
    j["m_star"] = nullptr;
    j["witness"] = nullptr;
    j["margin"] = nullptr;
    j["diagnostics"] = f.diagnostics;
    ledger = &f.ledger;
  }
  json its = json::array();
  for (const auto& e : *ledger) its.push_back(entry_json(prog, e));
  j["iterations"] = its;
  j["compressed"] = compressed_json(prog, *ledger, cfg.tol.rank);
  json trace = json::array();
  for (const auto& t : res.trace) {
    trace.push_back({{"m", t.m},
                     {"outcome", t.outcome},
                     {"mu", t.mu},
                     {"rounds", t.rounds},
                     {"h", t.h},
                     {"new_indices", t.new_indices},
                     {"cond_11star", t.cond_11star},
                     {"note", t.note}});
  }
  j["trace"] = trace;
  j["tolerances"] = json::parse(tolerances_json(cfg.tol));
  j["h"] = cfg.h;
  j["R"] = cfg.R;
  j["cap"] = res.cap;
  return j.dump(2);
}

void validate_report_schema(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("report is not valid JSON: ") + e.what());
  }
  const auto& status = need(j, "status", "$");
  if (!status.is_string()) schema_fail("$.status", "expected a string");
  const auto s = status.get<std::string>();
  if (s != "regular" && s != "regularized" && s != "failed") schema_fail("$.status", "unknown value " + s);
  const auto& ms = need(j, "m_star", "$");
  if (s != "failed" && !ms.is_number_integer()) schema_fail("$.m_star", "expected an integer");
  const auto& its = need(j, "iterations", "$");
  need_array(its, "$.iterations");
  for (std::size_t i = 0; i < its.size(); ++i) {
    const std::string path = "$.iterations[" + std::to_string(i) + "]";
    const auto& it = its[i];
    for (const char* key : {"tau", "gamma", "lambda", "L", "records", "prior", "Y"}) {
      need_array(need(it, key, path), path + "." + key);
    }
    if (!need(it, "cond_11star", path).is_boolean()) schema_fail(path + ".cond_11star", "expected a boolean");
    need_number(need(it, "m", path), path + ".m");
    need_number(need(it, "kernel_residual", path), path + ".kernel_residual");
    for (const auto& r : it.at("records")) {
      need_array(need(r, "tau", path + ".records"), path + ".records.tau");
      need_array(need(r, "L", path + ".records"), path + ".records.L");
    }
    for (const auto& r : it.at("prior")) {
      need_array(need(r, "tau", path + ".prior"), path + ".prior.tau");
      need_array(need(r, "L", path + ".prior"), path + ".prior.L");
    }
  }
  const auto& reg = need(j, "regularized", "$");
  if (s == "regularized") {
    for (const char* key : {"eq_rows", "ineq_rows", "witness"}) {
      need_array(need(reg, key, "$.regularized"), std::string("$.regularized.") + key);
    }
    need(reg, "omega", "$.regularized");
    need(reg, "margin", "$.regularized");
  }
  const auto& comp = need(j, "compressed", "$");
  if (!comp.is_object()) schema_fail("$.compressed", "expected an object");
  if (!need(j, "tolerances", "$").is_object()) schema_fail("$.tolerances", "expected an object");
  need_number(need(j, "h", "$"), "$.h");
  need_number(need(j, "R", "$"), "$.R");
  need_number(need(j, "cap", "$"), "$.cap");
}

ParsedReport parse_report(std::string_view text) {
  validate_report_schema(text);
  const json j = json::parse(text);
  ParsedReport r;
  try {
    r.status = j.at("status").get<std::string>();
    r.m_star = j.at("m_star").is_number_integer() ? j.at("m_star").get<int>() : 0;
    if (j.at("witness").is_array()) r.witness = j.at("witness").get<std::vector<double>>();
    RunConfig cfg;
    merge_config_json(cfg, j.at("tolerances").dump());
    r.tol = cfg.tol;
    r.h = j.at("h").get<double>();
    r.R = j.at("R").get<double>();
    r.cap = j.at("cap").get<int>();
    for (const auto& it : j.at("iterations")) {
      FaceLedgerEntry e;
      e.m = it.at("m").get<int>();
      e.Y = SymMatrix::from_rows(it.at("Y").get<std::vector<std::vector<double>>>());
      e.face = parse_records(it.at("records"));
      e.prior = parse_records(it.at("prior"));
      const auto& tau = it.at("tau");
      const auto& gamma = it.at("gamma");
      if (tau.size() != gamma.size()) throw ParseError("report iteration has tau/gamma length mismatch");
      for (std::size_t i = 0; i < tau.size(); ++i) {
        e.certificate.new_indices.push_back(
            {SimplexPoint(tau[i].get<std::vector<double>>()), gamma[i].get<double>()});
      }
      for (const auto& l : it.at("lambda")) {
        const auto v = l.get<std::vector<double>>();
        e.certificate.lambda.push_back(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
      }
      e.cond_11star = it.at("cond_11star").get<bool>();
      e.kernel_residual = it.at("kernel_residual").get<double>();
      r.ledger.push_back(std::move(e));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("report field has the wrong type: ") + e.what());
  } catch (const InputError& e) {
    throw ParseError(std::string("report holds invalid data: ") + e.what());
  }
  return r;
}

std::string summary_text(const CopositiveProgram& prog, const RegResult& res) {
  std::ostringstream os;
  auto vec = [&](const std::vector<double>& v) {
    os << '[';
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
    os << ']';
  };
  auto ledger_lines = [&](const std::vector<FaceLedgerEntry>& ledger) {
    for (const auto& e : ledger) {
      os << "  m=" << e.m << ": " << e.certificate.new_indices.size() << " new index(es)";
      for (const auto& ni : e.certificate.new_indices) {
        os << " (";
        for (int k = 0; k < ni.tau.dim(); ++k) os << (k ? ", " : "") << ni.tau[k];
        os << ")";
      }
      os << ", kernel residual " << e.kernel_residual << (e.cond_11star ? "" : ", disjointness check failed")
         << '\n';
      if (prog.p() <= 6) {
        for (const auto& row : e.Y.rows()) {
          os << "    ";
          vec(row);
          os << '\n';
        }
      }
    }
  };
  if (const auto* r = std::get_if<Regular>(&res.outcome)) {
    os << "regular: Slater point x = ";
    vec(r->witness);
    os << ", margin " << r->margin << '\n';
  } else if (const auto* g = std::get_if<Regularized>(&res.outcome)) {
    os << "regularized after m* = " << g->m_star << " zero iteration(s); witness x = ";
    vec(g->problem.witness);
    os << ", margin " << g->problem.margin << '\n';
    ledger_lines(g->ledger);
    for (const auto& rec : g->problem.records) {
      os << "  tau = (";
      for (int k = 0; k < rec.tau.dim(); ++k) os << (k ? ", " : "") << rec.tau[k];
      os << "), L = {";
      const auto ks = rec.L.to_vector();
      for (std::size_t i = 0; i < ks.size(); ++i) os << (i ? ", " : "") << ks[i] + 1;
      os << "}\n";
    }
  } else {
    const auto& f = std::get<Failed>(res.outcome);
    os << "failed: " << f.diagnostics << '\n';
    ledger_lines(f.ledger);
  }
  return os.str();
}

}  // namespace coporeg
