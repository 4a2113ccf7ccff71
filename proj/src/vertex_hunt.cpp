#include "scorenet/vertex_hunt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "scorenet/error.hpp"
#include "scorenet/kmeans.hpp"
#include "scorenet/matching.hpp"

namespace scorenet {

VhMethod parse_vh_method(const std::string& name) {
  if (name == "sp") return VhMethod::sp;
  if (name == "cvs") return VhMethod::cvs;
  if (name == "svs0") return VhMethod::svs0;
  if (name == "svs_star" || name == "svs*") return VhMethod::svs_star;
  if (name == "svs_plus" || name == "svs+") return VhMethod::svs_plus;
  throw InvalidArgument("unknown vertex-hunting method '" + name + "' (expected sp, cvs, svs0, svs_star, svs_plus)");
}

std::string to_string(VhMethod method) {
  switch (method) {
    case VhMethod::sp: return "sp";
    case VhMethod::cvs: return "cvs";
    case VhMethod::svs0: return "svs0";
    case VhMethod::svs_star: return "svs_star";
    case VhMethod::svs_plus: return "svs_plus";
  }
  return "?";
}

namespace {

// Minimise ||V' w - x|| over the probability simplex by a primal active set.
// Passive-set subproblems are equality constrained and solved through KKT.
Eigen::VectorXd simplex_least_squares(const Eigen::VectorXd& x, const Eigen::MatrixXd& v) {
  const Index k = v.rows();
  const Eigen::MatrixXd g = v * v.transpose();
  const Eigen::VectorXd h = v * x;
  const double tol = 1e-13 * std::max(1.0, g.diagonal().maxCoeff());

  Index start = 0;
  ((v.rowwise() - x.transpose()).rowwise().squaredNorm()).minCoeff(&start);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(k);
  w(start) = 1.0;
  std::vector<char> passive(static_cast<std::size_t>(k), 0);
  passive[start] = 1;

  auto solve_passive = [&](const std::vector<char>& set) {
    std::vector<Index> idx;
    for (Index i = 0; i < k; ++i) {
      if (set[i]) idx.push_back(i);
    }
    const Index p = static_cast<Index>(idx.size());
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(p + 1, p + 1);
    Eigen::VectorXd rhs(p + 1);
    for (Index a = 0; a < p; ++a) {
      for (Index b = 0; b < p; ++b) kkt(a, b) = g(idx[a], idx[b]);
      kkt(a, p) = 1.0;
      kkt(p, a) = 1.0;
      rhs(a) = h(idx[a]);
    }
    rhs(p) = 1.0;
    const Eigen::VectorXd sol = kkt.completeOrthogonalDecomposition().solve(rhs);
    Eigen::VectorXd z = Eigen::VectorXd::Zero(k);
    for (Index a = 0; a < p; ++a) z(idx[a]) = sol(a);
    return z;
  };

  for (int outer = 0; outer < 10 * static_cast<int>(k) + 10; ++outer) {
    const Eigen::VectorXd grad = g * w - h;
    double nu = 0.0;
    int count = 0;
    for (Index i = 0; i < k; ++i) {
      if (passive[i]) {
        nu += grad(i);
        ++count;
      }
    }
    nu /= count;
    Index enter = -1;
    double most_negative = -tol;
    for (Index i = 0; i < k; ++i) {
      if (!passive[i] && grad(i) - nu < most_negative) {
        most_negative = grad(i) - nu;
        enter = i;
      }
    }
    if (enter < 0) return w;
    passive[enter] = 1;
    for (int inner = 0; inner <= static_cast<int>(k); ++inner) {
      const Eigen::VectorXd z = solve_passive(passive);
      bool feasible = true;
      double step = 1.0;
      for (Index i = 0; i < k; ++i) {
        if (passive[i] && z(i) <= 0.0) {
          feasible = false;
          step = std::min(step, w(i) / (w(i) - z(i)));
        }
      }
      if (feasible) {
        w = z;
        break;
      }
      w += step * (z - w);
      for (Index i = 0; i < k; ++i) {
        if (passive[i] && w(i) <= 1e-14) {
          passive[i] = 0;
          w(i) = 0.0;
        }
      }
      w /= w.sum();
    }
  }
  throw NumericalError("distance_to_hull: active-set iteration did not converge");
}

void sort_rows(Eigen::MatrixXd& m) {
  std::vector<Index> order(static_cast<std::size_t>(m.rows()));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    for (Index c = 0; c < m.cols(); ++c) {
      if (m(a, c) != m(b, c)) return m(a, c) < m(b, c);
    }
    return a < b;
  });
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (std::size_t r = 0; r < order.size(); ++r) out.row(static_cast<Index>(r)) = m.row(order[r]);
  m = std::move(out);
}

double max_distance_to_hull(const Eigen::MatrixXd& points, const Eigen::MatrixXd& vertices) {
  double worst = 0.0;
  for (Index i = 0; i < points.rows(); ++i) {
    worst = std::max(worst, distance_to_hull(points.row(i).transpose(), vertices));
  }
  return worst;
}

Eigen::MatrixXd select_rows(const Eigen::MatrixXd& m, const std::vector<Index>& rows) {
  Eigen::MatrixXd out(static_cast<Index>(rows.size()), m.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Index>(r)) = m.row(rows[r]);
  return out;
}

double binomial(Index n, Index k) {
  double out = 1.0;
  for (Index i = 1; i <= k; ++i) out = out * static_cast<double>(n - k + i) / static_cast<double>(i);
  return out;
}

void require_points(const Eigen::MatrixXd& points, Index k, const char* who) {
  if (k < 1) throw InvalidArgument(std::string(who) + ": k must be positive");
  if (points.rows() < k) throw InvalidArgument(std::string(who) + ": fewer points than vertices");
  if (!points.allFinite()) throw InvalidArgument(std::string(who) + ": points contain NaN or infinity");
}

}  // namespace

double distance_to_hull(const Eigen::VectorXd& x, const Eigen::MatrixXd& vertices) {
  if (vertices.rows() == 0) throw InvalidArgument("distance_to_hull: empty vertex set");
  if (vertices.rows() == 1) return (vertices.row(0).transpose() - x).norm();
  const Eigen::VectorXd w = simplex_least_squares(x, vertices);
  return (vertices.transpose() * w - x).norm();
}

double normalized_volume(const Eigen::MatrixXd& vertices) {
  const Index k = vertices.rows();
  if (k <= 1) return 1.0;
  double diameter = 0.0;
  for (Index a = 0; a < k; ++a) {
    for (Index b = a + 1; b < k; ++b) diameter = std::max(diameter, (vertices.row(a) - vertices.row(b)).norm());
  }
  if (diameter == 0.0) return 0.0;
  const Eigen::MatrixXd e = (vertices.bottomRows(k - 1).rowwise() - vertices.row(0)) / diameter;
  const double gram = (e * e.transpose()).determinant();
  double factorial = 1.0;
  for (Index i = 2; i < k; ++i) factorial *= static_cast<double>(i);
  return std::sqrt(std::max(0.0, gram)) / factorial;
}

VertexSet sp(const Eigen::MatrixXd& points, Index k) {
  require_points(points, k, "sp");
  const Index n = points.rows();
  const Index d = points.cols();
  Eigen::MatrixXd y(n, d + 1);
  y.leftCols(d) = points.rowwise() - points.colwise().mean();
  y.col(d).setOnes();

  std::vector<Index> chosen;
  double first_norm = 0.0;
  for (Index step = 0; step < k; ++step) {
    const Eigen::VectorXd norms = y.rowwise().norm();
    const double top = norms.maxCoeff();
    if (step == 0) first_norm = top;
    if (top <= 1e-10 * first_norm) {
      throw NumericalError("sp: residual cloud is rank deficient after " + std::to_string(step) +
                           " selections");
    }
    Index pick = 0;
    while (norms(pick) < top * (1.0 - 1e-12)) ++pick;
    chosen.push_back(pick);
    const Eigen::VectorXd u = y.row(pick).transpose() / top;
    y -= (y * u) * u.transpose();
  }
  VertexSet out;
  out.method = VhMethod::sp;
  out.vertices = select_rows(points, chosen);
  sort_rows(out.vertices);
  out.candidate_count = n;
  out.max_residual = max_distance_to_hull(points, out.vertices);
  return out;
}

VertexSet combinatorial_select(const Eigen::MatrixXd& candidates, Index k) {
  require_points(candidates, k, "combinatorial_select");
  const Index l = candidates.rows();
  if (binomial(l, k) > 1e6) {
    throw InvalidArgument("combinatorial_select: " + std::to_string(l) + " choose " + std::to_string(k) +
                          " subsets exceeds the 1e6 guard; use an SP-based second stage (svs_star)");
  }
  double scale = 0.0;
  for (Index i = 0; i < l; ++i) scale = std::max(scale, candidates.row(i).norm());
  const double tol = 1e-12 * std::max(1.0, scale);

  std::vector<Index> subset(static_cast<std::size_t>(k));
  std::iota(subset.begin(), subset.end(), Index{0});
  std::vector<Index> best;
  double best_objective = std::numeric_limits<double>::infinity();
  double best_volume = 0.0;

  while (true) {
    const Eigen::MatrixXd v = select_rows(candidates, subset);
    const double volume = normalized_volume(v);
    if (k == 1 || volume > 1e-12) {
      double objective = 0.0;
      std::size_t next = 0;
      for (Index i = 0; i < l && objective <= best_objective + tol; ++i) {
        if (next < subset.size() && subset[next] == i) {
          ++next;
          continue;
        }
        objective = std::max(objective, distance_to_hull(candidates.row(i).transpose(), v));
      }
      const bool better = objective < best_objective - tol ||
                          (objective <= best_objective + tol && volume > best_volume * (1.0 + 1e-12));
      if (best.empty() || better) {
        best = subset;
        best_objective = objective;
        best_volume = volume;
      }
    }
    Index pos = k - 1;
    while (pos >= 0 && subset[pos] == l - k + pos) --pos;
    if (pos < 0) break;
    ++subset[pos];
    for (Index j = pos + 1; j < k; ++j) subset[j] = subset[j - 1] + 1;
  }
  if (best.empty()) throw NumericalError("combinatorial_select: every candidate subset is degenerate");

  VertexSet out;
  out.method = VhMethod::cvs;
  out.vertices = select_rows(candidates, best);
  sort_rows(out.vertices);
  out.candidate_count = l;
  out.max_residual = max_distance_to_hull(candidates, out.vertices);
  return out;
}

Eigen::MatrixXd knn_denoise(const Eigen::MatrixXd& points, Index m, Index n_avg) {
  const Index n = points.rows();
  if (m < 0 || n_avg < 1) throw InvalidArgument("knn_denoise: need m >= 0 and N >= 1");
  n_avg = std::min(n_avg, n);
  Eigen::MatrixXd dist(n, n);
  for (Index i = 0; i < n; ++i) {
    dist(i, i) = 0.0;
    for (Index j = i + 1; j < n; ++j) dist(i, j) = dist(j, i) = (points.row(i) - points.row(j)).norm();
  }
  const double radius = 0.05 * dist.maxCoeff();

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::vector<Eigen::RowVectorXd> kept;
  for (Index i = 0; i < n; ++i) {
    Index close = 0;
    for (Index j = 0; j < n; ++j) {
      if (j != i && dist(i, j) <= radius) ++close;
    }
    if (close < m) continue;
    std::iota(order.begin(), order.end(), Index{0});
    std::partial_sort(order.begin(), order.begin() + n_avg, order.end(), [&](Index a, Index b) {
      return dist(i, a) != dist(i, b) ? dist(i, a) < dist(i, b) : a < b;
    });
    Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(points.cols());
    for (Index r = 0; r < n_avg; ++r) mean += points.row(order[r]);
    kept.push_back(mean / static_cast<double>(n_avg));
  }
  if (kept.empty()) throw InvalidArgument("knn_denoise: every point was removed; lower m");
  Eigen::MatrixXd out(static_cast<Index>(kept.size()), points.cols());
  for (std::size_t r = 0; r < kept.size(); ++r) out.row(static_cast<Index>(r)) = kept[r];
  return out;
}

Index default_local_centers(Index n, Index k) {
  const Index tenth = (n + 9) / 10;
  return std::min(n, std::max(k, std::min(tenth, std::max<Index>(10 * k, 20))));
}

VertexSet vertex_hunt(const Eigen::MatrixXd& points, Index k, VhMethod method, const VhParams& params,
                      std::uint64_t seed) {
  require_points(points, k, "vertex_hunt");
  const Index n = points.rows();
  VertexSet out;
  switch (method) {
    case VhMethod::sp:
      return sp(points, k);
    case VhMethod::cvs:
      return combinatorial_select(points, k);
    case VhMethod::svs0:
    case VhMethod::svs_star: {
      const Index l = params.local_centers.value_or(default_local_centers(n, k));
      if (l < k || l > n) throw InvalidArgument("vertex_hunt: L must lie in [k, n]");
      const Eigen::MatrixXd centers = kmeans(points, l, seed).centers;
      out = method == VhMethod::svs0 ? combinatorial_select(centers, k) : sp(centers, k);
      break;
    }
    case VhMethod::svs_plus: {
      const Index n_avg = params.knn_average.value_or((n + 9) / 10);
      const Eigen::MatrixXd denoised = knn_denoise(points, params.knn_min_neighbors, n_avg);
      if (denoised.rows() < k) throw InvalidArgument("vertex_hunt: fewer than k points survive the KNN filter");
      out = sp(denoised, k);
      break;
    }
  }
  out.method = method;
  return out;
}

double vertex_error(const Eigen::MatrixXd& estimate, const Eigen::MatrixXd& truth) {
  if (estimate.rows() != truth.rows() || estimate.cols() != truth.cols()) {
    throw InvalidArgument("vertex_error: shape mismatch");
  }
  const Index k = truth.rows();
  Eigen::MatrixXd cost(k, k);
  for (Index a = 0; a < k; ++a) {
    for (Index b = 0; b < k; ++b) cost(a, b) = (estimate.row(a) - truth.row(b)).norm();
  }
  const auto match = bottleneck_assignment(cost);
  double worst = 0.0;
  for (Index a = 0; a < k; ++a) worst = std::max(worst, cost(a, match[a]));
  return worst;
}

}  // namespace scorenet
