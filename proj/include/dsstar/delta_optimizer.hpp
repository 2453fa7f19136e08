#pragma once

#include "dsstar/eigen_iter.hpp"
#include "dsstar/nullspace.hpp"
#include "dsstar/qap.hpp"

namespace dsstar {

/// Step size, regularisation weight and PSD/NSD balance of the diagonal
/// shift search.
struct DeltaSearchParams {
  double tau = 4.0;
  double eta = 0.1;
  double beta = 0.2;
  int n_iter = 10;
  EigenOptions eig{};
  /// Use min(lambda_min, 0) and max(lambda_max, 0) as step factors, which is
  /// the true gradient of the eigenvalue penalties.  When false the raw
  /// eigenvalues are used.
  bool clamp_factors = true;

  /// Throws std::invalid_argument unless tau > 0, eta >= 0, beta in [0,1], n_iter >= 1.
  void validate() const;
};

/// Diagonal shifts (d1, d2) with safety shifts for both path endpoints:
/// mu0 <= 0 makes the alpha = 0 energy convex on the affine hull and
/// mu1 >= 0 makes the alpha = 1 energy concave there.
struct DeltaPathSpec {
  Vector d1;
  Vector d2;
  double mu0 = 0.0;
  double mu1 = 0.0;
  /// Some eigenpair computation did not reach its tolerance.
  bool eig_warning = false;
};

/// 0.5 * min(lambda_min, 0)^2.
double penalty_h(double lambda_min);

struct PenaltyGradient {
  Vector p1;  // gradient w.r.t. d1
  Vector p2;  // gradient w.r.t. d2
  double lambda_min = 0.0;
  bool converged = true;
};

/// Gradient of h(T(d1, d2)) through the smallest eigenpair of the reduced
/// operator; zero once T is positive semidefinite.
PenaltyGradient penalty_gradient(const QapInstance& inst, const NullBasis& basis, const Vector& d1, const Vector& d2,
                                 const EigenOptions& eig = {});

/// Proximal subgradient search over (d1, d2) starting at zero, followed by
/// the endpoint safety shifts.  Requires an orthonormal basis.
DeltaPathSpec optimize_delta(const QapInstance& inst, const NullBasis& basis, const DeltaSearchParams& params = {});

/// Endpoint safety shifts for fixed (d1, d2): mu0 = min(lambda_min(T(d1,d2)), 0),
/// mu1 = max(lambda_max(T(-d1,-d2)), 0), each refined once by a verifying
/// eigenpair call on the shifted operator.
DeltaPathSpec with_safety_shifts(const QapInstance& inst, const NullBasis& basis, Vector d1, Vector d2, const EigenOptions& eig);

/// Delta_alpha = (diag((1-2a) d1), diag((1-2a) d2), ((1-a) mu0 + a mu1) 1).
/// Throws std::invalid_argument for alpha outside [0, 1].
DeltaParams delta_at_alpha(const DeltaPathSpec& spec, double alpha);

}  // namespace dsstar
