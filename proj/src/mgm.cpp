#include "dsstar/mgm.hpp"

#include "dsstar/lap.hpp"
#include "dsstar/nullspace.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace dsstar {

// ---------------------------------------------------------------------------
// MgmInstance / BlockMatching

int MgmInstance::pair_index(int i, int j) const {
  if (!(0 <= i && i < j && j < k)) throw std::invalid_argument("mgm: pair index needs 0 <= i < j < k");
  // Pairs before row i: sum_{r < i} (k - 1 - r).
  return i * (2 * k - i - 1) / 2 + (j - i - 1);
}

void MgmInstance::validate() const {
  if (k < 2) throw std::invalid_argument("mgm: need at least two graphs");
  if (n < 1) throw std::invalid_argument("mgm: need at least one point per graph");
  if (static_cast<int>(pair_costs.size()) != k * (k - 1) / 2) throw std::invalid_argument("mgm: expected k(k-1)/2 pair costs");
  for (const auto& w : pair_costs)
    if (w.n() != n) throw std::invalid_argument("mgm: pair cost size differs from n");
  if (ground_truth) {
    if (static_cast<int>(ground_truth->size()) != k - 1) throw std::invalid_argument("mgm: ground truth needs k-1 permutations");
    for (const auto& p : *ground_truth)
      if (p.size() != n) throw std::invalid_argument("mgm: ground truth permutation size differs from n");
  }
}

BlockMatching::BlockMatching(int k, int n) : k_(k), n_(n), blocks_(static_cast<std::size_t>(k * (k - 1) / 2), Matrix::Zero(n, n)) {
  if (k < 2 || n < 1) throw std::invalid_argument("block matching: need k >= 2 and n >= 1");
}

BlockMatching BlockMatching::barycentric(int k, int n) {
  BlockMatching X(k, n);
  for (auto& b : X.blocks_) b.setConstant(1.0 / n);
  return X;
}

BlockMatching BlockMatching::from_permutations(int k, int n, const std::vector<PermutationMatrix>& upper_blocks) {
  BlockMatching X(k, n);
  if (upper_blocks.size() != X.blocks_.size()) throw std::invalid_argument("block matching: wrong number of blocks");
  for (std::size_t p = 0; p < upper_blocks.size(); ++p) {
    if (upper_blocks[p].size() != n) throw std::invalid_argument("block matching: block size differs from n");
    X.blocks_[p] = upper_blocks[p].to_matrix();
  }
  return X;
}

int BlockMatching::index(int i, int j) const {
  if (!(0 <= i && i < j && j < k_)) throw std::invalid_argument("block matching: upper block needs 0 <= i < j < k");
  return i * (2 * k_ - i - 1) / 2 + (j - i - 1);
}

const Matrix& BlockMatching::upper(int i, int j) const { return blocks_[static_cast<std::size_t>(index(i, j))]; }
Matrix& BlockMatching::upper(int i, int j) { return blocks_[static_cast<std::size_t>(index(i, j))]; }

Matrix BlockMatching::block(int i, int j) const {
  if (i == j) return Matrix::Identity(n_, n_);
  return i < j ? upper(i, j) : Matrix(upper(j, i).transpose());
}

Matrix BlockMatching::assemble() const {
  const Eigen::Index N = static_cast<Eigen::Index>(k_) * n_;
  Matrix Y(N, N);
  for (int i = 0; i < k_; ++i)
    for (int j = 0; j < k_; ++j) Y.block(i * n_, j * n_, n_, n_) = block(i, j);
  return Y;
}

PermutationMatrix BlockMatching::permutation(int i, int j) const {
  auto p = DoublyStochasticMatrix(block(i, j)).as_permutation(1e-9);
  if (!p) throw std::invalid_argument("block matching: block is not a permutation");
  return *p;
}

// ---------------------------------------------------------------------------
// Penalty

double nsd_penalty(const Matrix& Y) {
  const Eigen::SelfAdjointEigenSolver<Matrix> es(Y, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseMin(0.0).squaredNorm();
}

Matrix nsd_penalty_gradient(const Matrix& Y) {
  const Eigen::SelfAdjointEigenSolver<Matrix> es(Y);
  const Vector neg = es.eigenvalues().cwiseMin(0.0);
  return 2.0 * es.eigenvectors() * neg.asDiagonal() * es.eigenvectors().transpose();
}

// ---------------------------------------------------------------------------
// Joint Frank-Wolfe

namespace {

struct BlockState {
  Vector x;
  Vector qx;
  double fx = 0.0;
  int iterations = 0;
  bool done = false;
};

// Penalty value along X_ij + gamma * D for a single upper block.
double penalty_along(Matrix Y, int i, int j, int n, const Matrix& D, double gamma) {
  Y.block(i * n, j * n, n, n) += gamma * D;
  Y.block(j * n, i * n, n, n) += gamma * D.transpose();
  return nsd_penalty(Y);
}

// Minimiser of phi over [0, 1] among 0, 1 and a golden-section estimate.
template <typename Phi>
double search_unit_interval(const Phi& phi) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = 0.0, hi = 1.0;
  double a = hi - r * (hi - lo), b = lo + r * (hi - lo);
  double fa = phi(a), fb = phi(b);
  for (int it = 0; it < 40; ++it) {
    if (fa <= fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - r * (hi - lo);
      fa = phi(a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + r * (hi - lo);
      fb = phi(b);
    }
  }
  double best = 0.0, f_best = 0.0;  // phi(0) == 0 by construction
  const double mid = fa <= fb ? a : b;
  const double f_mid = std::min(fa, fb);
  if (f_mid < f_best) {
    best = mid;
    f_best = f_mid;
  }
  if (phi(1.0) < f_best) best = 1.0;
  return best;
}

}  // namespace

MgmResult solve_mgm(const MgmInstance& inst, const MgmOptions& options) {
  inst.validate();
  if (options.pf_steps < 1) throw std::invalid_argument("mgm: pf_steps must be at least 1");
  const int k = inst.k;
  const int n = inst.n;
  const double sigma = options.sigma.value_or(16000.0 / k);
  if (!(sigma >= 0.0)) throw std::invalid_argument("mgm: sigma must be nonnegative");
  const int pairs = k * (k - 1) / 2;

  MgmResult result;
  result.sigma = sigma;
  if (n >= 2) {
    const NullBasis basis = NullBasis::orthonormal(n);
    for (const auto& w : inst.pair_costs) result.pair_paths.push_back(optimize_delta(w, basis, options.delta));
  } else {
    result.pair_paths.assign(static_cast<std::size_t>(pairs), DeltaPathSpec{Vector::Zero(1), Vector::Zero(1), 0.0, 0.0, false});
  }

  std::vector<std::pair<int, int>> pair_ids;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) pair_ids.emplace_back(i, j);

  BlockMatching X = BlockMatching::barycentric(k, n);
  const FwOptions& fw = options.fw;
  for (int stage = 0; stage <= options.pf_steps; ++stage) {
    const double alpha = static_cast<double>(stage) / options.pf_steps;
    std::vector<ReparamObjective> objectives;
    objectives.reserve(static_cast<std::size_t>(pairs));
    std::vector<BlockState> state(static_cast<std::size_t>(pairs));
    for (int p = 0; p < pairs; ++p) {
      objectives.emplace_back(inst.pair_costs[static_cast<std::size_t>(p)],
                              delta_at_alpha(result.pair_paths[static_cast<std::size_t>(p)], alpha));
      auto& st = state[static_cast<std::size_t>(p)];
      const auto& obj = objectives.back();
      st.x = vec(X.upper(pair_ids[static_cast<std::size_t>(p)].first, pair_ids[static_cast<std::size_t>(p)].second));
      obj.apply_curvature(st.x, st.qx);
      st.fx = st.x.dot(st.qx) + obj.linear().dot(st.x) + obj.constant();
    }

    for (;;) {
      bool active = false;
      for (int p = 0; p < pairs; ++p) {
        auto& st = state[static_cast<std::size_t>(p)];
        if (st.done) continue;
        const auto [i, j] = pair_ids[static_cast<std::size_t>(p)];
        const auto& obj = objectives[static_cast<std::size_t>(p)];
        const Vector& b = obj.linear();

        Matrix Y;
        double pen = 0.0;
        Vector g = 2.0 * st.qx + b;
        if (sigma > 0.0) {
          Y = X.assemble();
          pen = nsd_penalty(Y);
          // X_ij appears as block (i, j) and, transposed, as block (j, i).
          const Matrix G = nsd_penalty_gradient(Y);
          g += sigma * vec(Matrix(G.block(i * n, j * n, n, n) + G.block(j * n, i * n, n, n).transpose()));
        }
        const LapResult lap = solve_lap(unvec(g, n), fw.lap);
        const Vector s = lap.perm.to_vec();
        const double gap = g.dot(st.x - s);
        if (gap <= fw.tol * (1.0 + std::abs(st.fx + sigma * pen)) || st.iterations >= fw.max_iter) {
          st.done = true;
          continue;
        }
        Vector qs;
        obj.apply_curvature_vertex(lap.perm, qs);
        const Vector d = s - st.x;
        const double a = d.dot(qs - st.qx);
        double gamma;
        if (sigma > 0.0) {
          const double slope = (2.0 * st.qx + b).dot(d);
          const Matrix D = unvec(d, n);
          gamma = search_unit_interval([&](double t) {
            return t * slope + t * t * a + sigma * (penalty_along(Y, i, j, n, D, t) - pen);
          });
        } else {
          const double slope = -gap;
          gamma = a > 0.0 ? std::clamp(-slope / (2.0 * a), 0.0, 1.0) : ((slope + a < 0.0) ? 1.0 : 0.0);
        }
        if (gamma == 0.0) {
          st.done = true;
          continue;
        }
        if (gamma == 1.0) {
          st.x = s;
          st.qx = qs;
        } else {
          st.x += gamma * d;
          st.qx = (1.0 - gamma) * st.qx + gamma * qs;
        }
        st.fx = st.x.dot(st.qx) + b.dot(st.x) + obj.constant();
        ++st.iterations;
        X.upper(i, j) = unvec(st.x, n);
        active = true;
      }
      if (!active) break;
      ++result.fw_sweeps;
      // The coupling can move a finished block's gradient; give it another look.
      if (sigma > 0.0)
        for (auto& st : state)
          if (st.iterations < fw.max_iter) st.done = false;
    }
    for (int p = 0; p < pairs; ++p) {
      const auto [i, j] = pair_ids[static_cast<std::size_t>(p)];
      X.upper(i, j) = DoublyStochasticMatrix(unvec(state[static_cast<std::size_t>(p)].x, n)).matrix();
    }
  }

  result.relaxed = X;
  std::vector<PermutationMatrix> rounded;
  for (const auto& [i, j] : pair_ids) {
    const DoublyStochasticMatrix B(X.upper(i, j));
    auto p = B.as_permutation(1e-9);
    rounded.push_back(p ? *p : project_to_permutation(B));
  }
  result.rounded = BlockMatching::from_permutations(k, n, rounded);
  result.matching = synchronize(result.rounded);
  return result;
}

// ---------------------------------------------------------------------------
// Synchronisation and evaluation

BlockMatching synchronize(const BlockMatching& X) {
  const int k = X.k();
  const int n = X.n();
  const Eigen::SelfAdjointEigenSolver<Matrix> es(X.assemble());
  const Matrix U = es.eigenvectors().rightCols(n);
  const Matrix U0 = U.topRows(n);
  std::vector<PermutationMatrix> anchored(static_cast<std::size_t>(k));
  anchored[0] = PermutationMatrix::identity(n);
  for (int i = 1; i < k; ++i) {
    const Matrix S = U.middleRows(static_cast<Eigen::Index>(i) * n, n) * U0.transpose();
    anchored[static_cast<std::size_t>(i)] = solve_lap(-S, LapMethod::hungarian).perm;
  }
  std::vector<PermutationMatrix> blocks;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      blocks.push_back(anchored[static_cast<std::size_t>(i)] * anchored[static_cast<std::size_t>(j)].transpose());
  return BlockMatching::from_permutations(k, n, blocks);
}

bool consistency_check(const BlockMatching& X) {
  const int k = X.k();
  std::vector<std::vector<PermutationMatrix>> P(static_cast<std::size_t>(k), std::vector<PermutationMatrix>(static_cast<std::size_t>(k)));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) P[i][j] = X.permutation(i, j);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      for (int l = 0; l < k; ++l)
        if (!(P[i][j] * P[j][l] == P[i][l])) return false;
  return true;
}

std::vector<PermutationMatrix> truth_blocks(int k, const std::vector<PermutationMatrix>& truth) {
  if (static_cast<int>(truth.size()) != k - 1) throw std::invalid_argument("truth_blocks: need k-1 permutations");
  const int n = truth.front().size();
  const auto from0 = [&](int i) { return i == 0 ? PermutationMatrix::identity(n) : truth[static_cast<std::size_t>(i - 1)]; };
  std::vector<PermutationMatrix> blocks;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) blocks.push_back(from0(i).transpose() * from0(j));
  return blocks;
}

double accuracy(const BlockMatching& X, const std::optional<std::vector<PermutationMatrix>>& truth) {
  if (!truth) throw std::invalid_argument("accuracy: ground truth missing");
  const int k = X.k();
  const int n = X.n();
  if (static_cast<int>(truth->size()) != k - 1) throw std::invalid_argument("accuracy: ground truth needs k-1 permutations");
  const auto blocks = truth_blocks(k, *truth);
  double hits = 0.0;
  std::size_t p = 0;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j, ++p) hits += X.upper(i, j).cwiseProduct(blocks[p].to_matrix()).sum();
  return hits / (static_cast<double>(k * (k - 1) / 2) * n);
}

MgmInstance make_synthetic_mgm(int k, int n, double noise, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  MgmInstance inst;
  inst.k = k;
  inst.n = n;
  std::vector<PermutationMatrix> truth;
  for (int i = 1; i < k; ++i) {
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) perm[static_cast<std::size_t>(a)] = a;
    for (int a = n - 1; a > 0; --a) std::swap(perm[static_cast<std::size_t>(a)], perm[rng() % static_cast<std::uint64_t>(a + 1)]);
    truth.emplace_back(std::move(perm));
  }
  const auto blocks = truth_blocks(k, truth);
  for (const auto& t : blocks) {
    const Vector v = t.to_vec();
    Matrix W = -v * v.transpose();
    if (noise != 0.0) W += noise * random_symmetric(W.rows(), rng);
    inst.pair_costs.push_back(QapInstance::dense(std::move(W)));
  }
  inst.ground_truth = std::move(truth);
  inst.validate();
  return inst;
}

}  // namespace dsstar
