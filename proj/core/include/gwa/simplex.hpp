#pragma once

#include <optional>
#include <vector>

#include "gwa/types.hpp"

namespace gwa {

// Finds x >= 0 with A x = b using a phase-one simplex over exact rationals
// with Bland's rule (no cycling). Returns a basic feasible solution, or
// nullopt if the system is infeasible.
std::optional<std::vector<Rat>> feasible_point(std::vector<std::vector<Rat>> A,
                                               std::vector<Rat> b);

}  // namespace gwa
