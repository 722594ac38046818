#pragma once

#include "spine3/rational.hpp"

#include <optional>
#include <vector>

namespace spine3 {

using ZVec = std::vector<Integer>;
using ZMat = std::vector<ZVec>; // row-major

// Solve A x = b over the integers. A is m x n (rows of length n). Returns an
// integer solution (free coordinates pinned to zero in the Hermite chart) or
// nullopt when none exists. Uses a column-operation Hermite reduction
// H = A U with U unimodular, then forward substitution with divisibility
// checks.
std::optional<ZVec> solve_integer(const ZMat& a, const ZVec& b);

} // namespace spine3
