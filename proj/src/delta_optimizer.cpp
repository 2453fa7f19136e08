#include "dsstar/delta_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dsstar {

namespace {

// Shift eigenpairs are computed more tightly than the default so the
// published convexity margins hold after the shift.
EigenOptions tightened(EigenOptions eig) {
  eig.tol = std::min(eig.tol, 1e-10);
  eig.max_iter = std::max(eig.max_iter, 300);
  return eig;
}

}  // namespace

void DeltaSearchParams::validate() const {
  if (!(tau > 0.0)) throw std::invalid_argument("delta search: tau must be positive");
  if (!(eta >= 0.0)) throw std::invalid_argument("delta search: eta must be nonnegative");
  if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument("delta search: beta must lie in [0, 1]");
  if (n_iter < 1) throw std::invalid_argument("delta search: n_iter must be at least 1");
}

double penalty_h(double lambda_min) {
  const double m = std::min(lambda_min, 0.0);
  return 0.5 * m * m;
}

PenaltyGradient penalty_gradient(const QapInstance& inst, const NullBasis& basis, const Vector& d1, const Vector& d2,
                                 const EigenOptions& eig) {
  const EigenResult r = extreme_eigenpair(reduced_operator(inst, d1, d2, basis), Extreme::smallest, eig);
  const AdjointSums sums = adjoint_sums(basis, r.vector);
  const double factor = -std::min(r.value, 0.0);
  return {factor * sums.column_sums, factor * sums.row_sums, r.value, r.converged};
}

DeltaPathSpec with_safety_shifts(const QapInstance& inst, const NullBasis& basis, Vector d1, Vector d2, const EigenOptions& eig) {
  if (basis.kind() != BasisKind::orthonormal) throw std::invalid_argument("safety shifts need an orthonormal null basis");
  const EigenOptions tight = tightened(eig);
  DeltaPathSpec spec;
  const LinearOperator t0 = reduced_operator(inst, d1, d2, basis);
  const LinearOperator t1 = reduced_operator(inst, -d1, -d2, basis);
  const EigenResult lo = extreme_eigenpair(t0, Extreme::smallest, tight);
  const EigenResult hi = extreme_eigenpair(t1, Extreme::largest, tight);
  spec.mu0 = std::min(lo.value, 0.0);
  spec.mu1 = std::max(hi.value, 0.0);
  spec.eig_warning = !lo.converged || !hi.converged;

  // Verify on the shifted operators and absorb the remaining slack.
  const auto shifted = [](const LinearOperator& op, double mu) {
    return LinearOperator{op.dim, [op, mu](const Vector& x, Vector& out) {
                            op.apply(x, out);
                            out -= mu * x;
                          }};
  };
  const EigenResult lo2 = extreme_eigenpair(shifted(t0, spec.mu0), Extreme::smallest, tight);
  const EigenResult hi2 = extreme_eigenpair(shifted(t1, spec.mu1), Extreme::largest, tight);
  spec.mu0 += std::min(lo2.value, 0.0);
  spec.mu1 += std::max(hi2.value, 0.0);
  spec.eig_warning = spec.eig_warning || !lo2.converged || !hi2.converged;

  spec.d1 = std::move(d1);
  spec.d2 = std::move(d2);
  return spec;
}

DeltaPathSpec optimize_delta(const QapInstance& inst, const NullBasis& basis, const DeltaSearchParams& params) {
  params.validate();
  if (basis.n() != inst.n()) throw std::invalid_argument("optimize_delta: basis size mismatch");
  if (basis.kind() != BasisKind::orthonormal) throw std::invalid_argument("optimize_delta: needs an orthonormal null basis");
  const int n = inst.n();
  Vector d1 = Vector::Zero(n);
  Vector d2 = Vector::Zero(n);
  const double tau = params.tau;
  const double beta = params.beta;
  bool warning = false;

  for (int it = 0; it < params.n_iter; ++it) {
    // T0 = T(d1, d2) should become PSD and T1 = T(-d1, -d2) NSD.
    const EigenResult lo = extreme_eigenpair(reduced_operator(inst, d1, d2, basis), Extreme::smallest, params.eig);
    const EigenResult hi = extreme_eigenpair(reduced_operator(inst, -d1, -d2, basis), Extreme::largest, params.eig);
    warning = warning || !lo.converged || !hi.converged;
    const double f_lo = params.clamp_factors ? std::min(lo.value, 0.0) : lo.value;
    const double f_hi = params.clamp_factors ? std::max(hi.value, 0.0) : hi.value;
    const AdjointSums vp = adjoint_sums(basis, lo.vector);
    const AdjointSums vm = adjoint_sums(basis, hi.vector);
    d1 += (1.0 - beta) * tau * f_lo * vp.column_sums - beta * tau * f_hi * vm.column_sums;
    d2 += (1.0 - beta) * tau * f_lo * vp.row_sums - beta * tau * f_hi * vm.row_sums;
    const double shrink = 1.0 / (1.0 + tau * params.eta);
    d1 *= shrink;
    d2 *= shrink;
  }

  DeltaPathSpec spec = with_safety_shifts(inst, basis, std::move(d1), std::move(d2), params.eig);
  spec.eig_warning = spec.eig_warning || warning;
  return spec;
}

DeltaParams delta_at_alpha(const DeltaPathSpec& spec, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("delta_at_alpha: alpha must lie in [0, 1]");
  const double s = 1.0 - 2.0 * alpha;
  const Eigen::Index n = spec.d1.size();
  const double shift = (1.0 - alpha) * spec.mu0 + alpha * spec.mu1;
  return DeltaParams::diagonal(s * spec.d1, s * spec.d2, Vector::Constant(n * n, shift));
}

}  // namespace dsstar
