#include "scorenet/matching.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "scorenet/error.hpp"

namespace scorenet {

namespace {

constexpr Index kExhaustiveLimit = 10;

std::vector<Index> hungarian(const Eigen::MatrixXd& cost) {
  // Potentials formulation, 1-based internally.
  const Index n = cost.rows();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<Index> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (Index i = 1; i <= n; ++i) {
    p[0] = i;
    Index j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const Index i0 = p[j0];
      double delta = inf;
      Index j1 = 0;
      for (Index j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (Index j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const Index j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<Index> assignment(static_cast<std::size_t>(n));
  for (Index j = 1; j <= n; ++j) assignment[p[j] - 1] = j - 1;
  return assignment;
}

template <typename Score>
std::vector<Index> exhaustive(Index n, Score score) {
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  std::vector<Index> best = perm;
  double best_score = std::numeric_limits<double>::infinity();
  do {
    const double s = score(perm);
    if (s < best_score) {
      best_score = s;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace

std::vector<Index> min_cost_assignment(const Eigen::MatrixXd& cost) {
  if (cost.rows() != cost.cols()) throw InvalidArgument("min_cost_assignment: cost must be square");
  const Index n = cost.rows();
  if (n == 0) return {};
  if (n > kExhaustiveLimit) return hungarian(cost);
  return exhaustive(n, [&](const std::vector<Index>& perm) {
    double s = 0.0;
    for (Index i = 0; i < n; ++i) s += cost(i, perm[i]);
    return s;
  });
}

std::vector<Index> bottleneck_assignment(const Eigen::MatrixXd& cost) {
  if (cost.rows() != cost.cols()) throw InvalidArgument("bottleneck_assignment: cost must be square");
  const Index n = cost.rows();
  if (n > kExhaustiveLimit) throw InvalidArgument("bottleneck_assignment: at most 10 rows supported");
  if (n == 0) return {};
  return exhaustive(n, [&](const std::vector<Index>& perm) {
    double s = 0.0;
    for (Index i = 0; i < n; ++i) s = std::max(s, cost(i, perm[i]));
    return s;
  });
}

}  // namespace scorenet
