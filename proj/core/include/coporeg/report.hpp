// coporeg - regularization of linear copositive programs
// Licensed under Apache 2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "coporeg/config.hpp"
#include "coporeg/ledger.hpp"
#include "coporeg/regularizer.hpp"

namespace coporeg {

/// Run report as JSON text. Indices k, i and the L sets are 1-based.
std::string build_report(const CopositiveProgram& prog, const RegResult& res, const RunConfig& cfg);

struct ParsedReport {
  std::string status;  ///< "regular", "regularized" or "failed"
  int m_star = 0;
  std::vector<FaceLedgerEntry> ledger;
  std::vector<double> witness;
  Tolerances tol;
  double h = 0.0;
  double R = 0.0;
  int cap = 0;
};

/// Throws ParseError naming the first missing or mistyped field.
void validate_report_schema(std::string_view text);

/// Validates, then rebuilds the ledger entries (records, certificates, Y).
ParsedReport parse_report(std::string_view text);

/// Short human-readable summary; matrices are echoed for p <= 6.
std::string summary_text(const CopositiveProgram& prog, const RegResult& res);

}  // namespace coporeg
