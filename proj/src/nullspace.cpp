#include "dsstar/nullspace.hpp"

#include <cmath>
#include <stdexcept>

namespace dsstar {

NullBasis NullBasis::sparse(int n) {
  if (n < 2) throw std::invalid_argument("null basis: n must be at least 2");
  Matrix D = Matrix::Zero(n, n - 1);
  for (int i = 0; i < n - 1; ++i) {
    D(i, i) = 1.0;
    D(i + 1, i) = -1.0;
  }
  return {n, BasisKind::sparse_differences, std::move(D)};
}

NullBasis NullBasis::orthonormal(int n) {
  if (n < 2) throw std::invalid_argument("null basis: n must be at least 2");
  // Householder reflector H mapping e_1 to 1/sqrt(n); columns 2..n of H are an
  // orthonormal basis of the complement of the ones vector.
  Vector w = Vector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  w(0) -= 1.0;
  const double ww = w.squaredNorm();
  Matrix H = Matrix::Identity(n, n) - (2.0 / ww) * w * w.transpose();
  return {n, BasisKind::orthonormal, H.rightCols(n - 1)};
}

void NullBasis::expand(const Vector& u, Vector& out) const {
  if (u.size() != dim()) throw std::invalid_argument("null basis expand: dimension mismatch");
  const Eigen::Map<const Matrix> V(u.data(), n_ - 1, n_ - 1);
  const Matrix X = factor_ * V * factor_.transpose();
  out = vec(X);
}

Vector NullBasis::expand(const Vector& u) const {
  Vector out;
  expand(u, out);
  return out;
}

void NullBasis::restrict_to(const Vector& x, Vector& out) const {
  if (x.size() != static_cast<Eigen::Index>(n_) * n_) throw std::invalid_argument("null basis restrict: dimension mismatch");
  const Matrix V = factor_.transpose() * unvec(x, n_) * factor_;
  out = vec(V);
}

Vector NullBasis::restrict_to(const Vector& x) const {
  Vector out;
  restrict_to(x, out);
  return out;
}

std::vector<NullBasis::SparseColumn> NullBasis::sparse_columns() const {
  if (kind_ != BasisKind::sparse_differences) throw std::logic_error("sparse_columns: basis is not the sparse kind");
  std::vector<SparseColumn> cols;
  cols.reserve(static_cast<std::size_t>(dim()));
  // (x^i (x) x^j)_{a n + b} = x^i_a x^j_b with nonzeros at a in {i, i+1}, b in {j, j+1}.
  for (int i = 0; i < n_ - 1; ++i)
    for (int j = 0; j < n_ - 1; ++j) {
      const auto at = [&](int a, int b) { return static_cast<Eigen::Index>(a) * n_ + b; };
      cols.push_back({Entry{at(i, j), 1}, Entry{at(i, j + 1), -1}, Entry{at(i + 1, j), -1}, Entry{at(i + 1, j + 1), 1}});
    }
  return cols;
}

LinearOperator reduced_operator(const QapInstance& inst, const Vector& d1, const Vector& d2, const NullBasis& basis) {
  const int n = inst.n();
  if (basis.n() != n || d1.size() != n || d2.size() != n) throw std::invalid_argument("reduced_operator: dimension mismatch");
  // diag(d1) (x) I + I (x) diag(d2) is diagonal with entry d1_j + d2_i at (i, j).
  Vector shift(inst.dim());
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) shift(vec_index(i, j, n)) = d1(j) + d2(i);
  return {basis.dim(), [inst, basis, shift](const Vector& u, Vector& out) {
            Vector x, wx;
            basis.expand(u, x);
            inst.apply_w(x, wx);
            wx.array() -= shift.array() * x.array();
            basis.restrict_to(wx, out);
          }};
}

AdjointSums adjoint_sums(const NullBasis& basis, const Vector& u) {
  const Vector x = basis.expand(u);
  const Matrix V = unvec(x, basis.n()).cwiseAbs2();
  return {V.colwise().sum().transpose(), V.rowwise().sum()};
}

}  // namespace dsstar
