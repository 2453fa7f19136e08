#pragma once

#include "dsstar/delta_optimizer.hpp"
#include "dsstar/frank_wolfe.hpp"
#include "dsstar/nullspace.hpp"
#include "dsstar/qap.hpp"

#include <string>

namespace dsstar {

enum class Method { ds_plus, ds_plusplus, ds_star };

const char* to_string(Method method);
/// Accepts "ds-plus", "ds-plusplus", "ds-star".
Method method_from_string(const std::string& name);

struct SolveOptions {
  DeltaSearchParams delta{};
  FwOptions fw{};
  int pf_steps = 10;
  /// Used for the single shift eigenvalue of DS+ and DS++.
  EigenOptions eig{1e-10, 300, 0};
};

struct Relaxation {
  Method method = Method::ds_star;
  /// Convex-end parameters; the relaxation minimises the reparametrised
  /// energy with these over the doubly-stochastic matrices.
  DeltaParams delta;
  /// Convex-to-concave path used by the projection.
  DeltaPathSpec path;
  /// Frank-Wolfe dual bound of the convex relaxation.
  double lower = 0.0;
  /// Relaxation objective at the returned X.
  double relaxed_objective = 0.0;
  DoublyStochasticMatrix X = DoublyStochasticMatrix::barycenter(1);
  FwReport fw;
  /// lambda_min(W) for DS+, lambda_min(F^T W F) for DS++, unused for DS*.
  double shift_eigenvalue = 0.0;
  bool eig_warning = false;
  double secs_delta = 0.0;
  double secs_fw = 0.0;
};

/// Delta = (lambda_min(W) I, 0, 0): convex on all of R^{n^2}.
Relaxation relax_ds_plus(const QapInstance& inst, const NullBasis& basis, const SolveOptions& options = {});
/// Delta = (lambda*_min I, 0, 0) with lambda*_min the smallest eigenvalue of
/// F^T W F: convex on the affine hull only.
Relaxation relax_ds_plusplus(const QapInstance& inst, const NullBasis& basis, const SolveOptions& options = {});
/// Delta from the diagonal shift search at alpha = 0.
Relaxation relax_ds_star(const QapInstance& inst, const NullBasis& basis, const SolveOptions& options = {});
Relaxation relax(Method method, const QapInstance& inst, const NullBasis& basis, const SolveOptions& options = {});

struct PathResult {
  PermutationMatrix perm;
  double upper = 0.0;
  /// The last stage ended off a vertex and the result was projected.
  bool fallback = false;
  int stages = 0;
  int fw_iterations = 0;
  double max_marginal_violation = 0.0;
  DoublyStochasticMatrix final_X = DoublyStochasticMatrix::barycenter(1);
};

/// Minimises the reparametrised energy along alpha = 0, 1/steps, ..., 1,
/// warm-starting each stage from the previous one (from `start`, or the
/// barycentre, for alpha = 0).
PathResult path_following_project(const QapInstance& inst, const DeltaPathSpec& spec, int steps,
                                  const FwOptions& fw = {}, const DoublyStochasticMatrix* start = nullptr);

/// The relaxed minimiser is (within 1e-6) a permutation and the bounds meet
/// within 1e-6 * (1 + |upper|).  Faithfulness of the relaxation makes this a
/// global optimality certificate.
bool certify(const DoublyStochasticMatrix& relaxed_X, double lower, double upper);

struct BoundsReport {
  Method method = Method::ds_star;
  double lower = 0.0;
  double upper = 0.0;
  PermutationMatrix perm;
  bool certified_global = false;
  DoublyStochasticMatrix relaxed_X = DoublyStochasticMatrix::barycenter(1);
  bool pf_fallback = false;
  bool eig_warning = false;
  /// Largest marginal violation over every Frank-Wolfe iterate.
  double max_marginal_violation = 0.0;
  double relaxed_objective = 0.0;
  double secs_delta = 0.0;
  double secs_fw = 0.0;
  double secs_total = 0.0;
};

/// Relaxation, path-following projection and certificate for one method.
BoundsReport solve(const QapInstance& inst, Method method, const SolveOptions& options = {});
BoundsReport solve(const QapInstance& inst, const NullBasis& basis, Method method, const SolveOptions& options = {});

}  // namespace dsstar
