#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <utility>
#include <vector>

namespace dsstar {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// All assignment matrices are vectorised column-major: entry X(i, j) lives at
// index j * n + i of vec(X).
inline Eigen::Index vec_index(Eigen::Index i, Eigen::Index j, Eigen::Index n) { return j * n + i; }

inline Eigen::Map<const Matrix> unvec(const Vector& x, Eigen::Index n) { return {x.data(), n, n}; }
inline Eigen::Map<Matrix> unvec(Vector& x, Eigen::Index n) { return {x.data(), n, n}; }
inline Vector vec(const Matrix& X) { return Eigen::Map<const Vector>(X.data(), X.size()); }

/// A permutation of [n] interpreted as a 0/1 matrix: column j has its single
/// one in row perm[j].
class PermutationMatrix {
 public:
  PermutationMatrix() = default;
  explicit PermutationMatrix(std::vector<int> perm);

  static PermutationMatrix identity(int n);

  int size() const { return static_cast<int>(perm_.size()); }
  int operator[](int column) const { return perm_[static_cast<std::size_t>(column)]; }
  const std::vector<int>& indices() const { return perm_; }

  Matrix to_matrix() const;
  Vector to_vec() const;
  PermutationMatrix transpose() const;
  /// Matrix product this * rhs.
  PermutationMatrix operator*(const PermutationMatrix& rhs) const;

  friend bool operator==(const PermutationMatrix&, const PermutationMatrix&) = default;

 private:
  std::vector<int> perm_;
};

/// Nonnegative n x n matrix with unit row and column sums.
class DoublyStochasticMatrix {
 public:
  static constexpr double kSumTolerance = 1e-9;
  static constexpr double kClampTolerance = 1e-12;

  /// Entries in [-1e-12, 0) are clamped to zero; anything else that violates
  /// nonnegativity or the marginals throws std::invalid_argument.
  explicit DoublyStochasticMatrix(Matrix entries);

  static DoublyStochasticMatrix barycenter(int n);
  static DoublyStochasticMatrix from_permutation(const PermutationMatrix& p);

  int size() const { return static_cast<int>(entries_.rows()); }
  const Matrix& matrix() const { return entries_; }
  Vector to_vec() const { return vec(entries_); }

  /// Largest |row sum - 1| or |column sum - 1|.
  static double marginal_violation(const Matrix& X);

  /// The permutation this matrix equals within `tol` entrywise, if any.
  std::optional<PermutationMatrix> as_permutation(double tol = 1e-6) const;

 private:
  Matrix entries_;
};

/// Symmetric quadratic-plus-linear cost over vec(X).  W is either dense
/// (n^2 x n^2) or Koopmans-Beckmann factored, W = B^T (x) A.  A factored W is
/// used through its symmetric part (B^T (x) A + B (x) A^T) / 2, which leaves
/// x^T W x unchanged.
class QapInstance {
 public:
  QapInstance() = default;

  /// W is symmetrised on ingest.
  static QapInstance dense(Matrix W, Vector c);
  static QapInstance dense(Matrix W);
  static QapInstance koopmans_beckmann(Matrix A, Matrix B, Vector c);

  int n() const { return n_; }
  Eigen::Index dim() const { return static_cast<Eigen::Index>(n_) * n_; }
  bool is_factored() const { return static_cast<bool>(kb_a_); }
  const Vector& c() const { return c_; }

  /// out = W x.
  void apply_w(const Vector& x, Vector& out) const;
  Vector apply_w(const Vector& x) const;
  /// out = W vec(P); O(n^3) rather than a full product.
  void apply_w_vertex(const PermutationMatrix& p, Vector& out) const;

  double quadratic(const Vector& x) const;
  double quadratic(const PermutationMatrix& p) const;

  /// Materialised symmetric W; only meant for small problems and test oracles.
  Matrix dense_w() const;
  /// Present only for dense instances.
  const Matrix* dense_storage() const { return w_.get(); }
  const Matrix& kb_a() const { return *kb_a_; }
  const Matrix& kb_b() const { return *kb_b_; }

 private:
  int n_ = 0;
  std::shared_ptr<const Matrix> w_;
  std::shared_ptr<const Matrix> kb_a_;
  std::shared_ptr<const Matrix> kb_b_;
  Vector c_;
};

/// (D1, D2, d) parametrising Z = D1 (x) I + I (x) D2 + diag(d).
class DeltaParams {
 public:
  DeltaParams() = default;
  DeltaParams(Matrix D1, Matrix D2, Vector d);

  static DeltaParams zero(int n);
  /// D1 = diag(d1), D2 = diag(d2).
  static DeltaParams diagonal(const Vector& d1, const Vector& d2, Vector d);
  static DeltaParams diagonal(const Vector& d1, const Vector& d2);

  int n() const { return static_cast<int>(d1_.rows()); }
  const Matrix& D1() const { return d1_; }
  const Matrix& D2() const { return d2_; }
  const Vector& d() const { return d_; }
  bool is_diagonal() const { return diagonal_; }
  /// <I, D1 + D2>.
  double trace_sum() const { return d1_.trace() + d2_.trace(); }

 private:
  Matrix d1_;
  Matrix d2_;
  Vector d_;
  bool diagonal_ = false;
};

/// f(x) = x^T W x + c^T x.
double eval_energy(const QapInstance& inst, const Vector& x);
double eval_energy(const QapInstance& inst, const PermutationMatrix& p);

/// Z(delta) x through reshaping: vec(X D1^T) + vec(D2 X) + d .* x.
Vector apply_z(const DeltaParams& delta, const Vector& x);
void apply_z(const DeltaParams& delta, const Vector& x, Vector& out);

/// x^T (W - Z) x + (c + d)^T x + <I, D1 + D2>; equals f on permutations.
double eval_reparam_energy(const QapInstance& inst, const DeltaParams& delta, const Vector& x);

struct BruteForceResult {
  PermutationMatrix perm;
  double value = 0.0;
};

inline constexpr int kBruteForceMaxN = 10;

/// Exhaustive minimum over all n! permutations (n <= 10); among exact ties the
/// lexicographically smallest permutation array wins.
BruteForceResult brute_force_min(const QapInstance& inst);

/// With Dh = Dp - D: Dh_ii >= max_{j != i} max(Dh_ij, 0) for every i.  When it
/// holds, swapping D for Dp in either matrix slot can only raise the
/// reparametrised energy on doubly-stochastic inputs.
bool tightness_dominance(const Matrix& D, const Matrix& Dp);

/// Closest permutation in Frobenius norm, i.e. the LAP maximising <P, X>.
PermutationMatrix project_to_permutation(const DoublyStochasticMatrix& X);

/// Sinkhorn-normalised exp(N(0,1)) matrix: 50 alternating scalings, continued
/// until the marginals are within 1e-13.
DoublyStochasticMatrix random_doubly_stochastic(int n, std::mt19937_64& rng);

/// Symmetric matrix with i.i.d. entries (M + M^T)/2, M ~ U(-1, 1).
Matrix random_symmetric(Eigen::Index dim, std::mt19937_64& rng);

/// Uniform double in the open interval (-1, 1), independent of the standard
/// library's distribution implementation.
double uniform_pm1(std::mt19937_64& rng);

}  // namespace dsstar
