#include "dsstar/lap.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>
#include <string>

namespace dsstar {

namespace {

double assignment_cost(const Matrix& C, const PermutationMatrix& p) {
  double s = 0.0;
  for (int j = 0; j < p.size(); ++j) s += C(p[j], j);
  return s;
}

// Shortest augmenting path with potentials; rows are inserted one at a time.
PermutationMatrix hungarian(const Matrix& C) {
  const int n = static_cast<int>(C.rows());
  constexpr double inf = std::numeric_limits<double>::infinity();
  // 1-based; column 0 is the virtual root of each augmenting search.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = match[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = C(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta || (minv[j] == delta && match[j] == 0 && j1 != 0 && match[j1] != 0)) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int j = 1; j <= n; ++j) perm[static_cast<std::size_t>(j - 1)] = match[j] - 1;
  return PermutationMatrix(std::move(perm));
}

double smallest_nonzero_gap(const Matrix& C) {
  std::vector<double> vals(C.data(), C.data() + C.size());
  std::sort(vals.begin(), vals.end());
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < vals.size(); ++k) {
    const double g = vals[k] - vals[k - 1];
    if (g > 0.0) gap = std::min(gap, g);
  }
  return gap;
}

// Forward Gauss-Seidel auction.  Persons are columns, objects are rows, and
// the benefit of giving row i to column j is -C(i, j).
PermutationMatrix auction(const Matrix& C) {
  const int n = static_cast<int>(C.rows());
  const double range = C.maxCoeff() - C.minCoeff();
  if (n == 1 || range == 0.0) return PermutationMatrix::identity(n);

  const double delta = std::max(smallest_nonzero_gap(C), 1e-9 * range);
  const double eps_final = delta / n;
  double eps = C.cwiseAbs().maxCoeff() / 4.0;

  std::vector<double> price(static_cast<std::size_t>(n), 0.0);
  std::vector<int> owner(static_cast<std::size_t>(n));   // row -> column
  std::vector<int> assigned(static_cast<std::size_t>(n));  // column -> row
  std::deque<int> queue;
  for (;;) {
    std::fill(owner.begin(), owner.end(), -1);
    std::fill(assigned.begin(), assigned.end(), -1);
    queue.clear();
    for (int j = 0; j < n; ++j) queue.push_back(j);
    while (!queue.empty()) {
      const int j = queue.front();
      queue.pop_front();
      int best = -1;
      double v1 = -std::numeric_limits<double>::infinity();
      double v2 = -std::numeric_limits<double>::infinity();
      for (int i = 0; i < n; ++i) {
        const double value = -C(i, j) - price[static_cast<std::size_t>(i)];
        if (value > v1) {
          v2 = v1;
          v1 = value;
          best = i;
        } else if (value > v2) {
          v2 = value;
        }
      }
      price[static_cast<std::size_t>(best)] += (v1 - v2) + eps;
      const int previous = owner[static_cast<std::size_t>(best)];
      if (previous >= 0) {
        assigned[static_cast<std::size_t>(previous)] = -1;
        queue.push_back(previous);
      }
      owner[static_cast<std::size_t>(best)] = j;
      assigned[static_cast<std::size_t>(j)] = best;
    }
    if (eps < eps_final) break;
    eps /= 5.0;
  }
  return PermutationMatrix(assigned);
}

}  // namespace

LapResult solve_lap(const Matrix& C, LapMethod method) {
  if (C.rows() != C.cols() || C.rows() == 0) throw std::invalid_argument("solve_lap: cost matrix must be square and non-empty");
  if (!C.allFinite()) throw std::invalid_argument("solve_lap: non-finite cost");
  LapResult r;
  r.method = method;
  r.perm = method == LapMethod::hungarian ? hungarian(C) : auction(C);
  r.cost = assignment_cost(C, r.perm);
  return r;
}

const char* to_string(LapMethod method) { return method == LapMethod::hungarian ? "hungarian" : "auction"; }

LapMethod lap_method_from_string(const std::string& name) {
  if (name == "hungarian") return LapMethod::hungarian;
  if (name == "auction") return LapMethod::auction;
  throw std::invalid_argument("unknown LAP method: " + name);
}

}  // namespace dsstar
