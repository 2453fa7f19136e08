#include "dsstar/relaxation.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace dsstar {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void require_basis(const QapInstance& inst, const NullBasis& basis) {
  if (basis.n() != inst.n()) throw std::invalid_argument("relaxation: basis size mismatch");
  if (basis.kind() != BasisKind::orthonormal) throw std::invalid_argument("relaxation: needs an orthonormal null basis");
}

// Minimise the convex-end energy from the barycentre and fill the bound fields.
void minimise_convex_end(const QapInstance& inst, Relaxation& r, const SolveOptions& options) {
  const auto t0 = Clock::now();
  const ReparamObjective objective(inst, r.delta);
  r.fw = fw_minimize(objective, DoublyStochasticMatrix::barycenter(inst.n()), options.fw);
  r.lower = r.fw.dual_bound;
  r.relaxed_objective = r.fw.objective;
  r.X = r.fw.X;
  r.secs_fw = seconds_since(t0);
}

// A uniform shift lambda split evenly over both diagonal slots; the path runs
// from Z = lambda I to Z = -lambda I plus the endpoint safety shifts.
DeltaPathSpec uniform_path(const QapInstance& inst, const NullBasis& basis, double lambda, const EigenOptions& eig) {
  const Vector half = Vector::Constant(inst.n(), 0.5 * lambda);
  return with_safety_shifts(inst, basis, half, half, eig);
}

}  // namespace

const char* to_string(Method method) {
  switch (method) {
    case Method::ds_plus:
      return "ds-plus";
    case Method::ds_plusplus:
      return "ds-plusplus";
    case Method::ds_star:
      return "ds-star";
  }
  return "?";
}

Method method_from_string(const std::string& name) {
  if (name == "ds-plus") return Method::ds_plus;
  if (name == "ds-plusplus") return Method::ds_plusplus;
  if (name == "ds-star") return Method::ds_star;
  throw std::invalid_argument("unknown method: " + name);
}

Relaxation relax_ds_plus(const QapInstance& inst, const NullBasis& basis, const SolveOptions& options) {
  require_basis(inst, basis);
  Relaxation r;
  r.method = Method::ds_plus;
  const auto t0 = Clock::now();
  const LinearOperator w_op{inst.dim(), [inst](const Vector& x, Vector& out) { inst.apply_w(x, out); }};
  const EigenResult e = extreme_eigenpair(w_op, Extreme::smallest, options.eig);
  r.shift_eigenvalue = e.value;
  const int n = inst.n();
  r.delta = DeltaParams(e.value * Matrix::Identity(n, n), Matrix::Zero(n, n), Vector::Zero(inst.dim()));
  r.path = uniform_path(inst, basis, e.value, options.eig);
  r.eig_warning = !e.converged || r.path.eig_warning;
  r.secs_delta = seconds_since(t0);
  minimise_convex_end(inst, r, options);
  return r;
}

Relaxation relax_ds_plusplus(const QapInstance& inst, const NullBasis& basis, const SolveOptions& options) {
  require_basis(inst, basis);
  Relaxation r;
  r.method = Method::ds_plusplus;
  const auto t0 = Clock::now();
  const int n = inst.n();
  const EigenResult e =
      extreme_eigenpair(reduced_operator(inst, Vector::Zero(n), Vector::Zero(n), basis), Extreme::smallest, options.eig);
  r.shift_eigenvalue = e.value;
  r.delta = DeltaParams(e.value * Matrix::Identity(n, n), Matrix::Zero(n, n), Vector::Zero(inst.dim()));
  r.path = uniform_path(inst, basis, e.value, options.eig);
  r.eig_warning = !e.converged || r.path.eig_warning;
  r.secs_delta = seconds_since(t0);
  minimise_convex_end(inst, r, options);
  return r;
}

Relaxation relax_ds_star(const QapInstance& inst, const NullBasis& basis, const SolveOptions& options) {
  require_basis(inst, basis);
  Relaxation r;
  r.method = Method::ds_star;
  const auto t0 = Clock::now();
  r.path = optimize_delta(inst, basis, options.delta);
  r.delta = delta_at_alpha(r.path, 0.0);
  r.eig_warning = r.path.eig_warning;
  r.secs_delta = seconds_since(t0);
  minimise_convex_end(inst, r, options);
  return r;
}

Relaxation relax(Method method, const QapInstance& inst, const NullBasis& basis, const SolveOptions& options) {
  switch (method) {
    case Method::ds_plus:
      return relax_ds_plus(inst, basis, options);
    case Method::ds_plusplus:
      return relax_ds_plusplus(inst, basis, options);
    case Method::ds_star:
      return relax_ds_star(inst, basis, options);
  }
  throw std::invalid_argument("relax: unknown method");
}

PathResult path_following_project(const QapInstance& inst, const DeltaPathSpec& spec, int steps, const FwOptions& fw,
                                  const DoublyStochasticMatrix* start) {
  if (steps < 1) throw std::invalid_argument("path following: steps must be at least 1");
  if (spec.d1.size() != inst.n() || spec.d2.size() != inst.n()) throw std::invalid_argument("path following: dimension mismatch");
  PathResult result;
  DoublyStochasticMatrix X = start ? *start : DoublyStochasticMatrix::barycenter(inst.n());
  for (int k = 0; k <= steps; ++k) {
    const double alpha = static_cast<double>(k) / steps;
    const ReparamObjective objective(inst, delta_at_alpha(spec, alpha));
    FwReport r = fw_minimize(objective, X, fw);
    result.fw_iterations += r.iterations;
    result.max_marginal_violation = std::max(result.max_marginal_violation, r.max_marginal_violation);
    X = std::move(r.X);
    ++result.stages;
  }
  result.final_X = X;
  if (auto p = X.as_permutation(1e-9)) {
    result.perm = *p;
  } else {
    result.perm = project_to_permutation(X);
    result.fallback = true;
  }
  result.upper = eval_energy(inst, result.perm);
  return result;
}

bool certify(const DoublyStochasticMatrix& relaxed_X, double lower, double upper) {
  if (!relaxed_X.as_permutation(1e-6)) return false;
  return std::abs(lower - upper) <= 1e-6 * (1.0 + std::abs(upper));
}

BoundsReport solve(const QapInstance& inst, const NullBasis& basis, Method method, const SolveOptions& options) {
  const auto t0 = Clock::now();
  BoundsReport report;
  report.method = method;
  if (inst.n() == 1) {
    report.perm = PermutationMatrix::identity(1);
    report.upper = report.lower = report.relaxed_objective = eval_energy(inst, report.perm);
    report.relaxed_X = DoublyStochasticMatrix::barycenter(1);
    report.certified_global = true;
    report.secs_total = seconds_since(t0);
    return report;
  }
  const Relaxation r = relax(method, inst, basis, options);
  report.lower = r.lower;
  report.relaxed_objective = r.relaxed_objective;
  report.relaxed_X = r.X;
  report.eig_warning = r.eig_warning;
  report.secs_delta = r.secs_delta;

  const auto t_pf = Clock::now();
  const PathResult pf = path_following_project(inst, r.path, options.pf_steps, options.fw, &r.X);
  report.secs_fw = r.secs_fw + seconds_since(t_pf);
  report.perm = pf.perm;
  report.upper = pf.upper;
  report.pf_fallback = pf.fallback;
  report.max_marginal_violation = std::max(r.fw.max_marginal_violation, pf.max_marginal_violation);
  // A relaxed minimiser sitting on a vertex is itself a feasible candidate.
  if (auto p = r.X.as_permutation(1e-6)) {
    const double v = eval_energy(inst, *p);
    if (v < report.upper) {
      report.upper = v;
      report.perm = *p;
    }
  }
  report.certified_global = certify(r.X, report.lower, report.upper);
  report.secs_total = seconds_since(t0);
  return report;
}

BoundsReport solve(const QapInstance& inst, Method method, const SolveOptions& options) {
  if (inst.n() == 1) return solve(inst, NullBasis::orthonormal(2), method, options);
  return solve(inst, NullBasis::orthonormal(inst.n()), method, options);
}

}  // namespace dsstar
