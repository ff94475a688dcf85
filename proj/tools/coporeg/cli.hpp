// coporeg - regularization of linear copositive programs
// Licensed under Apache 2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace coporeg::cli {

/// Exit codes: 0 success, 1 domain error, 2 usage error.
int cli_main(int argc, const char* const* argv);

/// Same, with arguments (program name excluded) and captured streams.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace coporeg::cli
