// coporeg - regularization of linear copositive programs
// Licensed under Apache 2.0

#include "coporeg/problem_io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "coporeg/errors.hpp"

namespace coporeg {

namespace {

using nlohmann::json;

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // Translate the byte offset into a line number for the message.
    std::size_t line = 1;
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    for (std::size_t i = 0; i < upto; ++i) {
      if (text[i] == '\n') ++line;
    }
    throw ParseError("malformed JSON at line " + std::to_string(line) + ": " + e.what());
  }
}

const json& field(const json& obj, const char* key) {
  if (!obj.is_object()) throw ParseError("expected a JSON object at top level");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(std::string("missing field \"") + key + "\"");
  return *it;
}

int as_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw ParseError("field " + where + " must be an integer");
  return v.get<int>();
}

double as_double(const json& v, const std::string& where) {
  if (!v.is_number()) throw ParseError("field " + where + " must be a number");
  return v.get<double>();
}

std::vector<double> as_vector(const json& v, const std::string& where) {
  if (!v.is_array()) throw ParseError("field " + where + " must be an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(as_double(v[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

SymMatrix as_matrix(const json& v, int p, const std::string& where) {
  if (!v.is_array() || static_cast<int>(v.size()) != p) {
    throw ParseError("field " + where + " must be a " + std::to_string(p) + "x" +
                     std::to_string(p) + " array (dimension mismatch)");
  }
  std::vector<std::vector<double>> rows;
  for (int k = 0; k < p; ++k) {
    auto row = as_vector(v[static_cast<std::size_t>(k)], where + "[" + std::to_string(k) + "]");
    if (static_cast<int>(row.size()) != p) {
      throw ParseError("field " + where + "[" + std::to_string(k) + "] has length " +
                       std::to_string(row.size()) + ", expected " + std::to_string(p) +
                       " (dimension mismatch)");
    }
    rows.push_back(std::move(row));
  }
  try {
    return SymMatrix::from_rows(rows);
  } catch (const InputError& e) {
    throw ParseError("field " + where + ": " + e.what());
  }
}

json matrix_json(const SymMatrix& d) { return json(d.rows()); }

}  // namespace

CopositiveProgram parse_problem(std::string_view text) {
  const json doc = parse_json(text);
  const int n = as_int(field(doc, "n"), "\"n\"");
  const int p = as_int(field(doc, "p"), "\"p\"");
  if (n < 1) throw ParseError("field \"n\" must be >= 1");
  if (p < 2) throw ParseError("field \"p\" must be >= 2");
  auto c = as_vector(field(doc, "c"), "\"c\"");
  if (static_cast<int>(c.size()) != n) {
    throw ParseError("field \"c\" has length " + std::to_string(c.size()) + ", expected n = " +
                     std::to_string(n) + " (dimension mismatch)");
  }
  const json& a = field(doc, "A");
  if (!a.is_array() || static_cast<int>(a.size()) != n + 1) {
    throw ParseError("field \"A\" must list n + 1 = " + std::to_string(n + 1) +
                     " matrices (dimension mismatch)");
  }
  std::vector<SymMatrix> mats;
  mats.reserve(static_cast<std::size_t>(n + 1));
  for (int i = 0; i <= n; ++i) {
    mats.push_back(as_matrix(a[static_cast<std::size_t>(i)], p, "\"A\"[" + std::to_string(i) + "]"));
  }
  return CopositiveProgram(std::move(c), std::move(mats));
}

std::string serialize_problem(const CopositiveProgram& prog) {
  json doc;
  doc["n"] = prog.n();
  doc["p"] = prog.p();
  doc["c"] = prog.c();
  json a = json::array();
  for (const auto& m : prog.matrices()) a.push_back(matrix_json(m));
  doc["A"] = std::move(a);
  return doc.dump(2) + "\n";
}

SymMatrix parse_matrix(std::string_view text) {
  const json doc = parse_json(text);
  const int p = as_int(field(doc, "p"), "\"p\"");
  if (p < 1) throw ParseError("field \"p\" must be >= 1");
  return as_matrix(field(doc, "D"), p, "\"D\"");
}

std::string serialize_matrix(const SymMatrix& d) {
  json doc;
  doc["p"] = d.dim();
  doc["D"] = matrix_json(d);
  return doc.dump(2) + "\n";
}

std::vector<SimplexPoint> parse_points(std::string_view text) {
  const json doc = parse_json(text);
  const json& w = field(doc, "W");
  if (!w.is_array()) throw ParseError("field \"W\" must be an array of points");
  std::vector<SimplexPoint> out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const std::string where = "\"W\"[" + std::to_string(i) + "]";
    auto coords = as_vector(w[i], where);
    if (!out.empty() && static_cast<int>(coords.size()) != out.front().dim()) {
      throw ParseError("field " + where + " has inconsistent dimension");
    }
    try {
      out.emplace_back(std::move(coords));
    } catch (const InputError& e) {
      throw ParseError("field " + where + ": " + e.what());
    }
  }
  return out;
}

std::string serialize_points(const std::vector<SimplexPoint>& pts) {
  json w = json::array();
  for (const auto& t : pts) w.push_back(std::vector<double>(t.coords().begin(), t.coords().end()));
  json doc;
  doc["W"] = std::move(w);
  return doc.dump(2) + "\n";
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("file not found: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace coporeg
