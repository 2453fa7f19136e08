#include "dsstar/eigen_iter.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>
#include <stdexcept>

namespace dsstar {

namespace {

void fix_sign(Vector& v) {
  Eigen::Index k = 0;
  v.cwiseAbs().maxCoeff(&k);
  if (v(k) < 0) v = -v;
}

// Largest eigenpair of `op` (callers negate for the smallest).
EigenResult largest_eigenpair(const LinearOperator& op, const EigenOptions& options) {
  const Eigen::Index m = op.dim;
  const auto apply = [&](const Vector& x, Vector& out) {
    op.apply(x, out);
    if (!out.allFinite()) throw std::runtime_error("extreme_eigenpair: operator returned non-finite values");
  };

  EigenResult result;
  if (m == 1) {
    Vector e = Vector::Ones(1), out(1);
    apply(e, out);
    result.value = out(0);
    result.vector = e;
    result.residual = 0.0;
    result.converged = true;
    result.iterations = 1;
    return result;
  }

  const Eigen::Index cap = std::min<Eigen::Index>(m, std::max(1, options.max_iter));
  Matrix Q(m, cap);
  std::vector<double> alpha, beta;
  alpha.reserve(static_cast<std::size_t>(cap));
  beta.reserve(static_cast<std::size_t>(cap));

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector q(m);
  for (Eigen::Index i = 0; i < m; ++i) q(i) = normal(rng);
  q.normalize();

  Vector w(m), y(m), my(m);
  Eigen::SelfAdjointEigenSolver<Matrix> tri;
  for (Eigen::Index k = 0; k < cap; ++k) {
    Q.col(k) = q;
    apply(q, w);
    const double a = q.dot(w);
    alpha.push_back(a);
    w -= a * q;
    if (k > 0) w -= beta.back() * Q.col(k - 1);
    // Two passes of classical Gram-Schmidt against the whole basis.
    for (int pass = 0; pass < 2; ++pass) {
      const Vector h = Q.leftCols(k + 1).transpose() * w;
      w.noalias() -= Q.leftCols(k + 1) * h;
    }
    const double b = w.norm();
    const Eigen::Index size = k + 1;
    const bool exhausted = size == cap || b <= 1e-14 * std::max(1.0, std::abs(a));
    const bool check = exhausted || size <= 40 || size % 4 == 0;
    if (check) {
      Vector diag = Eigen::Map<const Vector>(alpha.data(), size);
      Vector sub = size > 1 ? Vector(Eigen::Map<const Vector>(beta.data(), size - 1)) : Vector(0);
      tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
      const double theta = tri.eigenvalues()(size - 1);
      const double estimate = std::abs(b * tri.eigenvectors()(size - 1, size - 1));
      if (exhausted || estimate <= options.tol * (1.0 + std::abs(theta))) {
        y.noalias() = Q.leftCols(size) * tri.eigenvectors().col(size - 1);
        y.normalize();
        apply(y, my);
        const double value = y.dot(my);
        const double residual = (my - value * y).norm();
        result.value = value;
        result.vector = y;
        result.residual = residual;
        result.iterations = static_cast<int>(size);
        result.converged = residual <= options.tol * (1.0 + std::abs(value));
        if (result.converged || exhausted) break;
      }
    }
    if (b <= 1e-14 * std::max(1.0, std::abs(a))) break;
    q = w / b;
    beta.push_back(b);
  }
  return result;
}

}  // namespace

EigenResult extreme_eigenpair(const LinearOperator& op, Extreme which, const EigenOptions& options) {
  if (op.dim <= 0) throw std::invalid_argument("extreme_eigenpair: operator dimension is 0");
  if (!op.apply) throw std::invalid_argument("extreme_eigenpair: operator has no apply function");
  EigenResult r;
  if (which == Extreme::largest) {
    r = largest_eigenpair(op, options);
  } else {
    LinearOperator neg{op.dim, [&op](const Vector& x, Vector& out) {
                         op.apply(x, out);
                         out = -out;
                       }};
    r = largest_eigenpair(neg, options);
    r.value = -r.value;
  }
  fix_sign(r.vector);
  return r;
}

}  // namespace dsstar
