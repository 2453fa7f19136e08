#pragma once

#include "dsstar/qap.hpp"

#include <cstdint>
#include <functional>

namespace dsstar {

/// Matrix-free symmetric operator: apply(x, out) writes op * x into out.
struct LinearOperator {
  Eigen::Index dim = 0;
  std::function<void(const Vector&, Vector&)> apply;

  Vector operator()(const Vector& x) const {
    Vector out(dim);
    apply(x, out);
    return out;
  }
};

enum class Extreme { smallest, largest };

struct EigenOptions {
  double tol = 1e-8;
  int max_iter = 300;
  std::uint64_t seed = 0;
};

struct EigenResult {
  double value = 0.0;
  Vector vector;          // unit norm, largest-magnitude component positive
  double residual = 0.0;  // ||op v - value v||, recomputed from the returned pair
  bool converged = false;
  int iterations = 0;     // Lanczos steps (operator applications excluding the final residual check)
};

/// Extreme eigenpair by Lanczos with full reorthogonalisation from a seeded
/// Gaussian start vector.  `smallest` runs on -op.  Converged once the
/// residual is <= tol * (1 + |value|); after max_iter steps the best Ritz pair
/// is returned with converged = false.
///
/// Throws std::invalid_argument for an empty operator and std::runtime_error
/// when the operator produces non-finite values.
EigenResult extreme_eigenpair(const LinearOperator& op, Extreme which, const EigenOptions& options = {});

}  // namespace dsstar
