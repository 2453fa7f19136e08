#pragma once

#include "dsstar/qap.hpp"

#include <string>

namespace dsstar {

enum class LapMethod { auction, hungarian };

struct LapResult {
  PermutationMatrix perm;
  double cost = 0.0;
  LapMethod method = LapMethod::hungarian;
};

/// Minimises tr(C^T X) = sum_j C(perm[j], j) over permutations.
///
/// The Hungarian solver is exact; among tied augmenting choices it prefers an
/// unmatched column, so a constant cost matrix yields the identity.  The
/// auction solver runs epsilon-scaling from max|C|/4, dividing by 5 per round,
/// until epsilon < delta/n where delta is the smallest nonzero gap between
/// any two cost entries (floored at 1e-9 * cost range); the result is then
/// within n * epsilon of optimal.
///
/// Throws std::invalid_argument for non-square or non-finite input.
LapResult solve_lap(const Matrix& C, LapMethod method = LapMethod::hungarian);

const char* to_string(LapMethod method);
LapMethod lap_method_from_string(const std::string& name);

}  // namespace dsstar
