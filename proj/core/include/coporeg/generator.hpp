// coporeg - regularization of linear copositive programs
// Licensed under Apache 2.0

#pragma once

#include <cstdint>
#include <vector>

#include "coporeg/model.hpp"

namespace coporeg {

/// Random program whose constraint form vanishes identically at every
/// planted point: each A_i lies in {D : (Dt)_k = 0 for k in P_+(t)} and A_0
/// is copositive with t'A_0 t = 0, so x = 0 is feasible and the planted
/// points are immobile. Without planted points A_0 = I. Deterministic in
/// the seed. Throws GeneratorError when the planting subspace is {0}.
CopositiveProgram generate_instance(std::uint64_t seed, int p, int n,
                                    const std::vector<SimplexPoint>& planted,
                                    int p_max = 14);

}  // namespace coporeg
