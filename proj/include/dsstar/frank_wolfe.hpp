#pragma once

#include "dsstar/lap.hpp"
#include "dsstar/qap.hpp"

#include <vector>

namespace dsstar {

/// f(x) = x^T Q x + b^T x + k with Q symmetric, over vec(X), X n x n.
class QuadraticObjective {
 public:
  virtual ~QuadraticObjective() = default;

  virtual int n() const = 0;
  /// out = Q x.
  virtual void apply_curvature(const Vector& x, Vector& out) const = 0;
  /// out = Q vec(P).  Override when vertices admit a cheaper product.
  virtual void apply_curvature_vertex(const PermutationMatrix& p, Vector& out) const { apply_curvature(p.to_vec(), out); }
  virtual const Vector& linear() const = 0;
  virtual double constant() const = 0;

  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const;
};

/// The reparametrised energy with Q = W - Z(delta), b = c + d, k = <I, D1 + D2>.
class ReparamObjective final : public QuadraticObjective {
 public:
  ReparamObjective(const QapInstance& inst, DeltaParams delta);

  int n() const override { return inst_.n(); }
  void apply_curvature(const Vector& x, Vector& out) const override;
  void apply_curvature_vertex(const PermutationMatrix& p, Vector& out) const override;
  const Vector& linear() const override { return linear_; }
  double constant() const override { return constant_; }
  const DeltaParams& delta() const { return delta_; }

 private:
  QapInstance inst_;
  DeltaParams delta_;
  Vector linear_;
  double constant_ = 0.0;
};

struct FwOptions {
  double tol = 1e-6;
  int max_iter = 300;
  LapMethod lap = LapMethod::auction;
  bool record_trace = false;
};

struct FwReport {
  DoublyStochasticMatrix X = DoublyStochasticMatrix::barycenter(1);
  double objective = 0.0;
  /// Final <grad f(x), x - s>.
  double gap = 0.0;
  /// Best f(x_t) - gap_t seen; a lower bound on min f over the polytope
  /// whenever f is convex on the affine hull.
  double dual_bound = 0.0;
  int iterations = 0;
  bool converged = false;
  /// An exact line search chose no step although the gap was above tolerance.
  bool stalled = false;
  /// Largest marginal violation over all iterates.
  double max_marginal_violation = 0.0;
  /// Objective after each step, when requested.
  std::vector<double> trace;
};

/// Frank-Wolfe with exact line search: gamma = clamp(-b / 2a, 0, 1) when
/// the curvature a along s - x is positive, otherwise whichever of 0 and 1
/// is lower.  Stops once the gap is <= tol * (1 + |f|).
FwReport fw_minimize(const QuadraticObjective& f, const DoublyStochasticMatrix& X0, const FwOptions& options = {});

}  // namespace dsstar
