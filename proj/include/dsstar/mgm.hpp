#pragma once

#include "dsstar/delta_optimizer.hpp"
#include "dsstar/frank_wolfe.hpp"
#include "dsstar/qap.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace dsstar {

/// k graphs of n points each with a quadratic cost W_ij on vec(X_ij) for
/// every pair i < j.  X_ij maps points of graph j (columns) onto points of
/// graph i (rows).
struct MgmInstance {
  int k = 0;
  int n = 0;
  /// Pairs in the order (0,1), (0,2), ..., (0,k-1), (1,2), ...
  std::vector<QapInstance> pair_costs;
  /// Optional truth: X_{0,i} for i = 1..k-1.
  std::optional<std::vector<PermutationMatrix>> ground_truth;

  int pair_index(int i, int j) const;
  /// Throws std::invalid_argument on inconsistent sizes.
  void validate() const;
};

/// Symmetric k x k block matrix with identity diagonal blocks.  Only the
/// blocks above the diagonal are stored; X_ji = X_ij^T.
class BlockMatching {
 public:
  BlockMatching() = default;
  BlockMatching(int k, int n);

  static BlockMatching barycentric(int k, int n);
  static BlockMatching from_permutations(int k, int n, const std::vector<PermutationMatrix>& upper_blocks);

  int k() const { return k_; }
  int n() const { return n_; }
  /// Any (i, j); the diagonal is the identity.
  Matrix block(int i, int j) const;
  /// Upper block i < j.
  const Matrix& upper(int i, int j) const;
  Matrix& upper(int i, int j);
  /// The nk x nk matrix.
  Matrix assemble() const;
  /// Permutation view of block (i, j); throws std::invalid_argument if it is
  /// not a permutation within 1e-9.
  PermutationMatrix permutation(int i, int j) const;

 private:
  int index(int i, int j) const;

  int k_ = 0;
  int n_ = 0;
  std::vector<Matrix> blocks_;
};

struct MgmOptions {
  /// Penalty weight; unset selects 16000 / k.  Zero decouples the pairs.
  std::optional<double> sigma;
  int pf_steps = 30;
  DeltaSearchParams delta{};
  FwOptions fw{};
};

struct MgmResult {
  /// Final relaxed blocks after the alpha = 1 stage.
  BlockMatching relaxed;
  /// Each block projected to its nearest permutation.
  BlockMatching rounded;
  /// Transitively consistent output.
  BlockMatching matching;
  double sigma = 0.0;
  std::vector<DeltaPathSpec> pair_paths;
  int fw_sweeps = 0;
};

/// ||Y_-||_F^2 for symmetric Y.
double nsd_penalty(const Matrix& Y);
/// Gradient of ||Y_-||_F^2 w.r.t. symmetric Y, i.e. 2 Y_-.
Matrix nsd_penalty_gradient(const Matrix& Y);

/// Sum over pairs of the reparametrised pair energies plus sigma ||X_-||^2,
/// minimised by block-coordinate Frank-Wolfe along a shared alpha path,
/// then rounded and synchronised.
MgmResult solve_mgm(const MgmInstance& inst, const MgmOptions& options = {});

/// Spectral synchronisation: the top-n eigenvectors U of the block matrix,
/// P_i = LAP rounding of U_i U_0^T, X_ij = P_i P_j^T.
BlockMatching synchronize(const BlockMatching& X);

/// X_ij X_jl = X_il for every triple.  Throws std::invalid_argument when a
/// block is not a permutation.
bool consistency_check(const BlockMatching& X);

/// Fraction of correctly matched points over all ordered pairs i != j.
/// Throws std::invalid_argument when the truth is missing or mis-sized.
double accuracy(const BlockMatching& X, const std::optional<std::vector<PermutationMatrix>>& truth);

/// Truth blocks X_ij = X_0i^T X_0j for i < j built from X_0i.
std::vector<PermutationMatrix> truth_blocks(int k, const std::vector<PermutationMatrix>& truth);

/// W_ij = -vec(T_ij) vec(T_ij)^T + noise * S_ij with T_ij the true block and
/// S_ij symmetric uniform in (-1, 1).  With noise = 0 the truth is the unique
/// optimum of every pair by a margin of 4(n - 1).
MgmInstance make_synthetic_mgm(int k, int n, double noise, std::uint64_t seed);

}  // namespace dsstar
