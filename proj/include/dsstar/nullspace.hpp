#pragma once

#include "dsstar/eigen_iter.hpp"
#include "dsstar/qap.hpp"

#include <array>
#include <vector>

namespace dsstar {

enum class BasisKind {
  sparse_differences,  // columns x^i (x) x^j with x^i = e_i - e_{i+1}
  orthonormal,         // U (x) U with U an orthonormal basis of 1-perp
};

/// Basis F of ker(A), A the row/column-sum operator on vec(X).  Both kinds
/// are Kronecker squares of an n x (n-1) factor B whose columns are
/// orthogonal to the ones vector, so F v = vec(B V B^T) with V = unvec(v).
class NullBasis {
 public:
  struct Entry {
    Eigen::Index row;
    int value;  // +1 or -1
  };
  using SparseColumn = std::array<Entry, 4>;

  /// Throws std::invalid_argument for n < 2.
  static NullBasis sparse(int n);
  static NullBasis orthonormal(int n);

  int n() const { return n_; }
  BasisKind kind() const { return kind_; }
  /// (n-1)^2.
  Eigen::Index dim() const { return static_cast<Eigen::Index>(n_ - 1) * (n_ - 1); }
  const Matrix& factor() const { return factor_; }

  /// F u, length n^2.
  void expand(const Vector& u, Vector& out) const;
  Vector expand(const Vector& u) const;
  /// F^T x, length (n-1)^2.
  void restrict_to(const Vector& x, Vector& out) const;
  Vector restrict_to(const Vector& x) const;

  /// Explicit integer columns of the sparse basis, ordered z^{1,1}, z^{1,2},
  /// ..., z^{n-1,n-1}.  Throws std::logic_error for the orthonormal kind.
  std::vector<SparseColumn> sparse_columns() const;

 private:
  NullBasis(int n, BasisKind kind, Matrix factor) : n_(n), kind_(kind), factor_(std::move(factor)) {}

  int n_ = 0;
  BasisKind kind_ = BasisKind::orthonormal;
  Matrix factor_;
};

/// F^T (W - diag(d1) (x) I - I (x) diag(d2)) F as a matrix-free operator.
/// The returned handle keeps shared references to the instance data and a
/// copy of the basis.
LinearOperator reduced_operator(const QapInstance& inst, const Vector& d1, const Vector& d2, const NullBasis& basis);

/// Column sums and row sums of V = unvec((F u) .* (F u)).
struct AdjointSums {
  Vector column_sums;  // indexed by j, pairs with d1
  Vector row_sums;     // indexed by i, pairs with d2
};
AdjointSums adjoint_sums(const NullBasis& basis, const Vector& u);

}  // namespace dsstar
