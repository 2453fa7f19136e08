#include "dsstar/frank_wolfe.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dsstar {

double QuadraticObjective::value(const Vector& x) const {
  Vector qx;
  apply_curvature(x, qx);
  return x.dot(qx) + linear().dot(x) + constant();
}

Vector QuadraticObjective::gradient(const Vector& x) const {
  Vector qx;
  apply_curvature(x, qx);
  return 2.0 * qx + linear();
}

ReparamObjective::ReparamObjective(const QapInstance& inst, DeltaParams delta)
    : inst_(inst), delta_(std::move(delta)) {
  if (delta_.n() != inst_.n()) throw std::invalid_argument("reparam objective: dimension mismatch");
  linear_ = inst_.c() + delta_.d();
  constant_ = delta_.trace_sum();
}

void ReparamObjective::apply_curvature(const Vector& x, Vector& out) const {
  inst_.apply_w(x, out);
  out -= apply_z(delta_, x);
}

void ReparamObjective::apply_curvature_vertex(const PermutationMatrix& p, Vector& out) const {
  inst_.apply_w_vertex(p, out);
  out -= apply_z(delta_, p.to_vec());
}

namespace {

#ifndef NDEBUG
void check_gradient(const QuadraticObjective& f, const Vector& x) {
  Vector dir = Vector::LinSpaced(x.size(), -1.0, 1.0);
  const double h = 1e-6;
  const double fd = (f.value(x + h * dir) - f.value(x - h * dir)) / (2 * h);
  const double an = f.gradient(x).dot(dir);
  assert(std::abs(fd - an) <= 1e-4 * (1.0 + std::abs(an)) && "objective gradient inconsistent with value");
}
#endif

}  // namespace

FwReport fw_minimize(const QuadraticObjective& f, const DoublyStochasticMatrix& X0, const FwOptions& options) {
  const int n = f.n();
  if (X0.size() != n) throw std::invalid_argument("fw_minimize: start point dimension mismatch");
#ifndef NDEBUG
  check_gradient(f, X0.to_vec());
#endif

  Vector x = X0.to_vec();
  Vector qx, qs;
  f.apply_curvature(x, qx);
  const Vector& b = f.linear();
  double fx = x.dot(qx) + b.dot(x) + f.constant();

  FwReport report;
  report.dual_bound = -std::numeric_limits<double>::infinity();
  report.max_marginal_violation = DoublyStochasticMatrix::marginal_violation(X0.matrix());

  Vector g(x.size());
  for (;;) {
    g = 2.0 * qx + b;
    const LapResult lap = solve_lap(unvec(g, n), options.lap);
    const Vector s = lap.perm.to_vec();
    const double gap = g.dot(x - s);
    report.gap = gap;
    report.dual_bound = std::max(report.dual_bound, fx - gap);
    if (gap <= options.tol * (1.0 + std::abs(fx))) {
      report.converged = true;
      break;
    }
    if (report.iterations >= options.max_iter) break;

    f.apply_curvature_vertex(lap.perm, qs);
    const Vector d = s - x;
    const double a = d.dot(qs - qx);
    const double slope = -gap;
    double gamma;
    if (a > 0.0) {
      gamma = std::clamp(-slope / (2.0 * a), 0.0, 1.0);
    } else {
      gamma = (slope + a < 0.0) ? 1.0 : 0.0;
    }
    if (gamma == 0.0) {
      report.stalled = true;
      break;
    }
    if (gamma == 1.0) {
      x = s;
      qx = qs;
    } else {
      x += gamma * d;
      qx = (1.0 - gamma) * qx + gamma * qs;
    }
    fx = x.dot(qx) + b.dot(x) + f.constant();
    ++report.iterations;
    report.max_marginal_violation =
        std::max(report.max_marginal_violation, DoublyStochasticMatrix::marginal_violation(unvec(x, n)));
    if (options.record_trace) report.trace.push_back(fx);
  }

  report.objective = f.value(x);
  report.X = DoublyStochasticMatrix(Matrix(unvec(x, n)));
  return report;
}

}  // namespace dsstar
