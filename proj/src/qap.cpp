#include "dsstar/qap.hpp"

#include "dsstar/lap.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace dsstar {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

bool is_symmetric(const Matrix& M, double rel_tol) {
  if (M.rows() != M.cols()) return false;
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  return (M - M.transpose()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

}  // namespace

// ---------------------------------------------------------------------------
// PermutationMatrix

PermutationMatrix::PermutationMatrix(std::vector<int> perm) : perm_(std::move(perm)) {
  std::vector<char> seen(perm_.size(), 0);
  for (int p : perm_) {
    if (p < 0 || p >= static_cast<int>(perm_.size()) || seen[static_cast<std::size_t>(p)])
      throw std::invalid_argument("permutation: not a bijection on [n]");
    seen[static_cast<std::size_t>(p)] = 1;
  }
}

PermutationMatrix PermutationMatrix::identity(int n) {
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  return PermutationMatrix(std::move(p));
}

Matrix PermutationMatrix::to_matrix() const {
  const int n = size();
  Matrix X = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j) X((*this)[j], j) = 1.0;
  return X;
}

Vector PermutationMatrix::to_vec() const { return vec(to_matrix()); }

PermutationMatrix PermutationMatrix::transpose() const {
  std::vector<int> inv(perm_.size());
  for (std::size_t j = 0; j < perm_.size(); ++j) inv[static_cast<std::size_t>(perm_[j])] = static_cast<int>(j);
  return PermutationMatrix(std::move(inv));
}

PermutationMatrix PermutationMatrix::operator*(const PermutationMatrix& rhs) const {
  if (rhs.size() != size()) throw std::invalid_argument("permutation product: size mismatch");
  std::vector<int> out(perm_.size());
  for (std::size_t l = 0; l < perm_.size(); ++l) out[l] = perm_[static_cast<std::size_t>(rhs.perm_[l])];
  return PermutationMatrix(std::move(out));
}

// ---------------------------------------------------------------------------
// DoublyStochasticMatrix

DoublyStochasticMatrix::DoublyStochasticMatrix(Matrix entries) : entries_(std::move(entries)) {
  require(entries_.rows() == entries_.cols() && entries_.rows() > 0, "doubly stochastic: matrix must be square and non-empty");
  require(entries_.allFinite(), "doubly stochastic: non-finite entry");
  for (Eigen::Index k = 0; k < entries_.size(); ++k) {
    double& v = entries_.data()[k];
    if (v < 0.0) {
      if (v < -kClampTolerance) throw std::invalid_argument("doubly stochastic: negative entry");
      v = 0.0;
    }
  }
  if (marginal_violation(entries_) > kSumTolerance)
    throw std::invalid_argument("doubly stochastic: row or column sum differs from 1");
}

DoublyStochasticMatrix DoublyStochasticMatrix::barycenter(int n) {
  return DoublyStochasticMatrix(Matrix::Constant(n, n, 1.0 / n));
}

DoublyStochasticMatrix DoublyStochasticMatrix::from_permutation(const PermutationMatrix& p) {
  return DoublyStochasticMatrix(p.to_matrix());
}

double DoublyStochasticMatrix::marginal_violation(const Matrix& X) {
  const double rows = (X.rowwise().sum().array() - 1.0).abs().maxCoeff();
  const double cols = (X.colwise().sum().array() - 1.0).abs().maxCoeff();
  return std::max(rows, cols);
}

std::optional<PermutationMatrix> DoublyStochasticMatrix::as_permutation(double tol) const {
  const int n = size();
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  for (int j = 0; j < n; ++j) {
    Eigen::Index row = 0;
    entries_.col(j).maxCoeff(&row);
    if (used[static_cast<std::size_t>(row)]) return std::nullopt;
    used[static_cast<std::size_t>(row)] = 1;
    perm[static_cast<std::size_t>(j)] = static_cast<int>(row);
  }
  PermutationMatrix p(std::move(perm));
  if ((entries_ - p.to_matrix()).cwiseAbs().maxCoeff() > tol) return std::nullopt;
  return p;
}

// ---------------------------------------------------------------------------
// QapInstance

QapInstance QapInstance::dense(Matrix W, Vector c) {
  const Eigen::Index dim = W.rows();
  require(W.rows() == W.cols(), "qap instance: W must be square");
  const auto n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(dim))));
  require(n >= 1 && static_cast<Eigen::Index>(n) * n == dim, "qap instance: W must be n^2 x n^2");
  require(c.size() == dim, "qap instance: c must have length n^2");
  require(W.allFinite() && c.allFinite(), "qap instance: non-finite entries");
  QapInstance inst;
  inst.n_ = n;
  Matrix sym = 0.5 * (W + W.transpose());
  inst.w_ = std::make_shared<const Matrix>(std::move(sym));
  inst.c_ = std::move(c);
  return inst;
}

QapInstance QapInstance::dense(Matrix W) {
  const Eigen::Index dim = W.rows();
  return dense(std::move(W), Vector::Zero(dim));
}

QapInstance QapInstance::koopmans_beckmann(Matrix A, Matrix B, Vector c) {
  require(A.rows() == A.cols() && B.rows() == B.cols() && A.rows() == B.rows() && A.rows() >= 1,
          "qap instance: A and B must be square and of equal size");
  const auto n = static_cast<int>(A.rows());
  require(c.size() == static_cast<Eigen::Index>(n) * n, "qap instance: c must have length n^2");
  require(A.allFinite() && B.allFinite() && c.allFinite(), "qap instance: non-finite entries");
  QapInstance inst;
  inst.n_ = n;
  inst.kb_a_ = std::make_shared<const Matrix>(std::move(A));
  inst.kb_b_ = std::make_shared<const Matrix>(std::move(B));
  inst.c_ = std::move(c);
  return inst;
}

void QapInstance::apply_w(const Vector& x, Vector& out) const {
  if (x.size() != dim()) throw std::invalid_argument("apply_w: dimension mismatch");
  if (w_) {
    out.noalias() = (*w_) * x;
    return;
  }
  // W x = vec(A X B + A^T X B^T) / 2.
  const auto X = unvec(x, n_);
  const Matrix& A = *kb_a_;
  const Matrix& B = *kb_b_;
  Matrix Y = A * X * B;
  Y.noalias() += A.transpose() * X * B.transpose();
  Y *= 0.5;
  out = vec(Y);
}

Vector QapInstance::apply_w(const Vector& x) const {
  Vector out(dim());
  apply_w(x, out);
  return out;
}

void QapInstance::apply_w_vertex(const PermutationMatrix& p, Vector& out) const {
  if (p.size() != n_) throw std::invalid_argument("apply_w_vertex: dimension mismatch");
  if (w_) {
    out.setZero(dim());
    for (int j = 0; j < n_; ++j) out += w_->col(vec_index(p[j], j, n_));
    return;
  }
  // A P gathers columns of A: (A P)(:, j) = A(:, p[j]).
  const Matrix& A = *kb_a_;
  const Matrix& B = *kb_b_;
  Matrix AP(n_, n_), AtP(n_, n_);
  for (int j = 0; j < n_; ++j) {
    AP.col(j) = A.col(p[j]);
    AtP.col(j) = A.row(p[j]).transpose();
  }
  Matrix Y = AP * B;
  Y.noalias() += AtP * B.transpose();
  Y *= 0.5;
  out = vec(Y);
}

double QapInstance::quadratic(const Vector& x) const {
  if (x.size() != dim()) throw std::invalid_argument("quadratic: dimension mismatch");
  if (w_) return x.dot((*w_) * x);
  const auto X = unvec(x, n_);
  // tr(A X B X^T)
  return ((*kb_a_) * X * (*kb_b_)).cwiseProduct(X).sum();
}

double QapInstance::quadratic(const PermutationMatrix& p) const {
  if (p.size() != n_) throw std::invalid_argument("quadratic: dimension mismatch");
  double acc = 0.0;
  if (w_) {
    for (int l = 0; l < n_; ++l) {
      const Eigen::Index col = vec_index(p[l], l, n_);
      for (int j = 0; j < n_; ++j) acc += (*w_)(vec_index(p[j], j, n_), col);
    }
    return acc;
  }
  // tr(A P B P^T) = sum_{j,l} A(p_j, p_l) B(l, j)
  const Matrix& A = *kb_a_;
  const Matrix& B = *kb_b_;
  for (int l = 0; l < n_; ++l)
    for (int j = 0; j < n_; ++j) acc += A(p[j], p[l]) * B(l, j);
  return acc;
}

Matrix QapInstance::dense_w() const {
  if (w_) return *w_;
  const Matrix& A = *kb_a_;
  const Matrix& B = *kb_b_;
  const Eigen::Index N = dim();
  Matrix W(N, N);
  // (B^T (x) A)(j*n+i, l*n+k) = B(l, j) A(i, k)
  for (int l = 0; l < n_; ++l)
    for (int k = 0; k < n_; ++k)
      for (int j = 0; j < n_; ++j)
        for (int i = 0; i < n_; ++i) W(vec_index(i, j, n_), vec_index(k, l, n_)) = B(l, j) * A(i, k);
  return 0.5 * (W + W.transpose());
}

// ---------------------------------------------------------------------------
// DeltaParams

DeltaParams::DeltaParams(Matrix D1, Matrix D2, Vector d) : d1_(std::move(D1)), d2_(std::move(D2)), d_(std::move(d)) {
  const Eigen::Index n = d1_.rows();
  require(n >= 1 && d1_.cols() == n && d2_.rows() == n && d2_.cols() == n, "delta params: D1, D2 must be n x n");
  require(d_.size() == n * n, "delta params: d must have length n^2");
  require(is_symmetric(d1_, 1e-12) && is_symmetric(d2_, 1e-12), "delta params: D1 and D2 must be symmetric");
  require(d1_.allFinite() && d2_.allFinite() && d_.allFinite(), "delta params: non-finite entries");
  const auto off_diagonal_zero = [](const Matrix& M) {
    Matrix off = M;
    off.diagonal().setZero();
    return off.isZero(0.0);
  };
  diagonal_ = off_diagonal_zero(d1_) && off_diagonal_zero(d2_);
}

DeltaParams DeltaParams::zero(int n) { return {Matrix::Zero(n, n), Matrix::Zero(n, n), Vector::Zero(n * n)}; }

DeltaParams DeltaParams::diagonal(const Vector& d1, const Vector& d2, Vector d) {
  return {Matrix(d1.asDiagonal()), Matrix(d2.asDiagonal()), std::move(d)};
}

DeltaParams DeltaParams::diagonal(const Vector& d1, const Vector& d2) {
  return diagonal(d1, d2, Vector::Zero(d1.size() * d1.size()));
}

// ---------------------------------------------------------------------------
// Energies

double eval_energy(const QapInstance& inst, const Vector& x) {
  if (x.size() != inst.dim()) throw std::invalid_argument("eval_energy: dimension mismatch");
  return inst.quadratic(x) + inst.c().dot(x);
}

double eval_energy(const QapInstance& inst, const PermutationMatrix& p) {
  if (p.size() != inst.n()) throw std::invalid_argument("eval_energy: dimension mismatch");
  double lin = 0.0;
  for (int j = 0; j < inst.n(); ++j) lin += inst.c()(vec_index(p[j], j, inst.n()));
  return inst.quadratic(p) + lin;
}

void apply_z(const DeltaParams& delta, const Vector& x, Vector& out) {
  const int n = delta.n();
  if (x.size() != static_cast<Eigen::Index>(n) * n) throw std::invalid_argument("apply_z: dimension mismatch");
  const auto X = unvec(x, n);
  if (delta.is_diagonal()) {
    // X diag(d1) scales columns, diag(d2) X scales rows.
    const Vector d1 = delta.D1().diagonal();
    const Vector d2 = delta.D2().diagonal();
    Matrix Y = X * d1.asDiagonal();
    Y.noalias() += d2.asDiagonal() * X;
    out = vec(Y);
  } else {
    Matrix Y = X * delta.D1().transpose();
    Y.noalias() += delta.D2() * X;
    out = vec(Y);
  }
  out.array() += delta.d().array() * x.array();
}

Vector apply_z(const DeltaParams& delta, const Vector& x) {
  Vector out;
  apply_z(delta, x, out);
  return out;
}

double eval_reparam_energy(const QapInstance& inst, const DeltaParams& delta, const Vector& x) {
  if (delta.n() != inst.n() || x.size() != inst.dim()) throw std::invalid_argument("eval_reparam_energy: dimension mismatch");
  const double zx = x.dot(apply_z(delta, x));
  return inst.quadratic(x) - zx + (inst.c() + delta.d()).dot(x) + delta.trace_sum();
}

BruteForceResult brute_force_min(const QapInstance& inst) {
  const int n = inst.n();
  if (n > kBruteForceMaxN)
    throw std::invalid_argument("brute_force_min: n = " + std::to_string(n) + " exceeds limit " +
                                std::to_string(kBruteForceMaxN));
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  BruteForceResult best{PermutationMatrix(perm), eval_energy(inst, PermutationMatrix(perm))};
  while (std::next_permutation(perm.begin(), perm.end())) {
    PermutationMatrix p(perm);
    const double v = eval_energy(inst, p);
    if (v < best.value) best = {std::move(p), v};
  }
  return best;
}

bool tightness_dominance(const Matrix& D, const Matrix& Dp) {
  if (D.rows() != Dp.rows() || D.cols() != Dp.cols() || D.rows() != D.cols())
    throw std::invalid_argument("tightness_dominance: dimension mismatch");
  const Matrix Dh = Dp - D;
  for (Eigen::Index i = 0; i < Dh.rows(); ++i) {
    double worst = 0.0;
    for (Eigen::Index j = 0; j < Dh.cols(); ++j)
      if (j != i) worst = std::max(worst, Dh(i, j));
    if (Dh(i, i) < worst) return false;
  }
  return true;
}

PermutationMatrix project_to_permutation(const DoublyStochasticMatrix& X) {
  return solve_lap(-X.matrix(), LapMethod::hungarian).perm;
}

DoublyStochasticMatrix random_doubly_stochastic(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix M(n, n);
  for (Eigen::Index k = 0; k < M.size(); ++k) M.data()[k] = std::exp(normal(rng));
  for (int it = 0; it < 1000; ++it) {
    M.array().colwise() /= M.rowwise().sum().array();
    M.array().rowwise() /= M.colwise().sum().array();
    if (it >= 49 && DoublyStochasticMatrix::marginal_violation(M) <= 1e-13) break;
  }
  return DoublyStochasticMatrix(std::move(M));
}

double uniform_pm1(std::mt19937_64& rng) {
  for (;;) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
    const double v = 2.0 * u - 1.0;
    if (v != -1.0) return v;
  }
}

Matrix random_symmetric(Eigen::Index dim, std::mt19937_64& rng) {
  Matrix M(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index i = 0; i < dim; ++i) M(i, j) = uniform_pm1(rng);
  return 0.5 * (M + M.transpose());
}

}  // namespace dsstar
