// coporeg - regularization of linear copositive programs
// Licensed under Apache 2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "coporeg/regularizer.hpp"
#include "coporeg/tolerances.hpp"

namespace coporeg {

struct RunConfig {
  Tolerances tol;
  double h = 1.0 / 128;
  double R = 1e3;
  int cap = 0;  ///< 0: 2n + 2
  int p_max = kDefaultPMax;
  std::uint64_t seed = 1;
  int samples = 1000;
  std::string out;
  std::string report;
  int verbosity = 0;

  /// Throws InputError unless every tolerance is positive, 0 < h <= 1/4,
  /// R > 0, cap >= 0 (0 = default) and samples >= 0.
  void validate() const;

  SipOptions sip_options() const;
  RegOptions reg_options() const;
};

/// Overwrites the fields present in a JSON object. Tolerances use keys
/// "tol_feas", "tol_support", ...; the rest use their field names. Unknown
/// keys are rejected.
void merge_config_json(RunConfig& cfg, std::string_view json);

/// Defaults, then the file named by COPOREG_CONFIG if set.
RunConfig config_from_environment();

/// The tolerance block as a JSON object string.
std::string tolerances_json(const Tolerances& tol);

}  // namespace coporeg
