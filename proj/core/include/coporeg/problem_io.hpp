// coporeg - regularization of linear copositive programs
// Licensed under Apache 2.0

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "coporeg/model.hpp"

namespace coporeg {

/// Parses {"n": int, "p": int, "c": [n], "A": [(n+1) x p x p]}. Matrices are
/// row-major and must be symmetric to 1e-12. Throws ParseError naming the
/// offending field.
CopositiveProgram parse_problem(std::string_view text);

/// Inverse of parse_problem; doubles are written in shortest round-trip form
/// so parse(serialize(p)) == p exactly.
std::string serialize_problem(const CopositiveProgram& prog);

/// Matrix file {"p": int, "D": [[...]]}.
SymMatrix parse_matrix(std::string_view text);
std::string serialize_matrix(const SymMatrix& d);

/// Point-set file {"W": [[...], ...]}; every row must be a simplex point.
std::vector<SimplexPoint> parse_points(std::string_view text);
std::string serialize_points(const std::vector<SimplexPoint>& pts);

/// Reads a whole file; throws ParseError("file not found: ...") when absent.
std::string read_file(const std::filesystem::path& path);

}  // namespace coporeg
