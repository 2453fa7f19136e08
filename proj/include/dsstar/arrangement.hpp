#pragma once

#include "dsstar/qap.hpp"
#include "dsstar/relaxation.hpp"

#include <cstdint>

namespace dsstar {

/// Placing n items with feature vectors onto a rows x cols grid so that
/// feature distances match grid distances.  Grid cell j sits at
/// (j / cols, j % cols).
struct ArrangementProblem {
  /// One row per item.
  Matrix features;
  int rows = 0;
  int cols = 0;
  /// Pairwise feature distances.
  Matrix d;
  /// Pairwise grid distances.
  Matrix dp;
  /// mean(dp) / mean(d) over off-diagonal entries; 1 when mean(d) = 0.
  double c_scale = 1.0;

  int n() const { return static_cast<int>(features.rows()); }
};

struct Arrangement {
  ArrangementProblem problem;
  /// W_{(i,j),(k,l)} = |c d_ik - dp_jl| for X_ij = item i at cell j; c = 0.
  QapInstance instance;
};

/// Throws std::invalid_argument if rows * cols differs from the item count.
Arrangement build_arrangement(const Matrix& features, int rows, int cols);

/// Sum over cell pairs of |c d(item at j, item at l) - dp_jl|.  perm[j] is
/// the item placed at cell j.
double arrangement_objective(const ArrangementProblem& prob, const PermutationMatrix& perm);

/// arrangement_objective divided by n^2 mean(dp).
double normalized_arrangement_objective(const ArrangementProblem& prob, const PermutationMatrix& perm);

struct ArrangeResult {
  PermutationMatrix perm;
  /// Normalised objective of perm.
  double objective = 0.0;
  /// Normalised objective of a seeded uniformly random assignment.
  double initial_objective = 0.0;
  PermutationMatrix initial_perm;
  BoundsReport report;
};

ArrangeResult arrange(const Matrix& features, int rows, int cols, Method method, const SolveOptions& options = {},
                      std::uint64_t seed = 0);

/// Uniform random features in [0, 1)^3, one row per cell.
Matrix random_colors(int n, std::uint64_t seed);

}  // namespace dsstar
