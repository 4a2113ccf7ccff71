#include "scorenet/mixed_membership.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "scorenet/error.hpp"

namespace scorenet {

Eigen::VectorXd b1_from_spectra(const Eigen::VectorXd& lambdas, const Eigen::MatrixXd& vertices) {
  const Index k = vertices.rows();
  if (lambdas.size() != k || vertices.cols() != k - 1) {
    throw InvalidArgument("b1_from_spectra: need K eigenvalues and K vertices in R^(K-1)");
  }
  Eigen::VectorXd out(k);
  for (Index v = 0; v < k; ++v) {
    double radicand = lambdas(0);
    for (Index j = 0; j + 1 < k; ++j) radicand += lambdas(j + 1) * vertices(v, j) * vertices(v, j);
    if (!(radicand > 0.0)) {
      throw NumericalError("b1_from_spectra: nonpositive radicand " + std::to_string(radicand) + " at vertex " +
                           std::to_string(v) + "; the vertex set or eigen-ordering is inconsistent");
    }
    out(v) = 1.0 / std::sqrt(radicand);
  }
  return out;
}

BarycentricSolver::BarycentricSolver(const Eigen::MatrixXd& vertices) : k_(vertices.rows()) {
  if (vertices.cols() != k_ - 1) throw InvalidArgument("BarycentricSolver: need K vertices in R^(K-1)");
  Eigen::MatrixXd system(k_, k_);
  system.topRows(k_ - 1) = vertices.transpose();
  system.row(k_ - 1).setOnes();
  if (normalized_volume(vertices) <= 1e-12) {
    throw NumericalError("BarycentricSolver: vertices are affinely dependent");
  }
  lu_.compute(system);
}

Eigen::VectorXd BarycentricSolver::weights(const Eigen::VectorXd& point) const {
  if (point.size() != k_ - 1) throw InvalidArgument("BarycentricSolver: point dimension mismatch");
  Eigen::VectorXd rhs(k_);
  rhs.head(k_ - 1) = point;
  rhs(k_ - 1) = 1.0;
  return lu_.solve(rhs);
}

Eigen::VectorXd barycentric_weights(const Eigen::VectorXd& point, const Eigen::MatrixXd& vertices) {
  return BarycentricSolver(vertices).weights(point);
}

Eigen::MatrixXd memberships_from_weights(const Eigen::MatrixXd& ratios, const VertexSet& vertices,
                                         const Eigen::VectorXd& b1, Index& fallback_rows) {
  const BarycentricSolver solver(vertices.vertices);
  const Index n = ratios.rows();
  const Index k = vertices.k();
  Eigen::MatrixXd pi(n, k);
  fallback_rows = 0;
  for (Index i = 0; i < n; ++i) {
    const Eigen::VectorXd w = solver.weights(ratios.row(i).transpose());
    Eigen::RowVectorXd row = (w.array() / b1.array()).max(0.0).transpose();
    const double total = row.sum();
    if (total > 0.0) {
      pi.row(i) = row / total;
    } else {
      pi.row(i).setConstant(1.0 / static_cast<double>(k));
      ++fallback_rows;
    }
  }
  return pi;
}

namespace {

MembershipEstimate estimate_from_ratios(Eigen::MatrixXd ratios, const Eigen::VectorXd& lambdas, Index k,
                                        const MixedScoreOptions& options, std::uint64_t seed) {
  MembershipEstimate out;
  out.vertices = vertex_hunt(ratios, k, options.vh_method, options.vh_params, seed);
  out.b1_hat = b1_from_spectra(lambdas, out.vertices.vertices);
  out.pi_hat = memberships_from_weights(ratios, out.vertices, out.b1_hat, out.fallback_rows);
  out.ratios = std::move(ratios);
  return out;
}

}  // namespace

MembershipEstimate mixed_score_from_eigenpairs(const EigenPairs& eig, Index k, double threshold,
                                               const MixedScoreOptions& options, std::uint64_t seed) {
  if (k < 2 || eig.k() < k) throw InvalidArgument("mixed_score: need k >= 2 and k eigenpairs");
  return estimate_from_ratios(column_ratios(eig.vectors.leftCols(k), threshold), eig.values.head(k), k, options,
                              seed);
}

MembershipEstimate mixed_score(const Graph& g, Index k, const MixedScoreOptions& options, std::uint64_t seed) {
  if (k < 2) throw InvalidArgument("mixed_score: k must be at least 2");
  if (g.directed()) throw InvalidArgument("mixed_score: graph must be undirected");
  if (!g.connected()) {
    throw InvalidArgument("mixed_score: graph is disconnected; restrict it with giant_component first");
  }
  const EigenPairs eig = eigs_sym(g.adjacency(), k, 0.0, options.solver);
  const double t = options.threshold.value_or(default_threshold(g.n()));
  return estimate_from_ratios(column_ratios(eig.vectors, t), eig.values, k, options, seed);
}

MembershipEstimate mixed_score_oracle(const Eigen::MatrixXd& omega, Index k, const MixedScoreOptions& options,
                                      std::uint64_t seed) {
  if (k < 2) throw InvalidArgument("mixed_score_oracle: k must be at least 2");
  const EigenPairs eig = eigs_sym(omega, k, 0.0, options.solver);
  const double t = options.threshold.value_or(std::numeric_limits<double>::infinity());
  return estimate_from_ratios(column_ratios(eig.vectors, t), eig.values, k, options, seed);
}

Eigen::MatrixXd dynamic_ratios(const Eigen::MatrixXd& a_t, const EigenPairs& ref, double threshold) {
  const Index n = ref.n();
  const Index k = ref.k();
  if (a_t.rows() != n || a_t.cols() != n) throw InvalidArgument("dynamic_ratios: snapshot size mismatch");
  if (k < 2) throw InvalidArgument("dynamic_ratios: need at least two reference eigenpairs");
  if (!(threshold > 0.0)) throw InvalidArgument("dynamic_ratios: threshold must be positive");
  for (Index c = 1; c < k; ++c) {
    if (ref.values(c) == 0.0) {
      throw NumericalError("dynamic_ratios: reference eigenvalue " + std::to_string(c + 1) + " is zero");
    }
  }
  const Eigen::MatrixXd projected = a_t * ref.vectors;
  Eigen::MatrixXd out(n, k - 1);
  for (Index i = 0; i < n; ++i) {
    const double den = projected(i, 0);
    for (Index c = 0; c + 1 < k; ++c) {
      const double num = ref.values(0) * projected(i, c + 1);
      double r;
      if (std::abs(den) < 1e-12) {
        r = std::abs(num) < 1e-12 ? 0.0 : std::copysign(threshold, num * ref.values(c + 1));
      } else {
        r = num / (ref.values(c + 1) * den);
      }
      out(i, c) = std::clamp(r, -threshold, threshold);
    }
  }
  return out;
}

DynamicResult dynamic_mixed_score(const std::vector<Graph>& snapshots, Index k, const DynamicOptions& options,
                                  std::uint64_t seed) {
  if (snapshots.empty()) throw InvalidArgument("dynamic_mixed_score: no snapshots");
  if (k < 2) throw InvalidArgument("dynamic_mixed_score: k must be at least 2");
  const Index n = snapshots.front().n();
  for (std::size_t t = 0; t < snapshots.size(); ++t) {
    if (snapshots[t].n() != n) {
      throw InvalidArgument("dynamic_mixed_score: snapshot " + std::to_string(t + 1) + " has " +
                            std::to_string(snapshots[t].n()) + " nodes, expected " + std::to_string(n));
    }
  }
  if (!snapshots.front().connected()) throw InvalidArgument("dynamic_mixed_score: first snapshot is disconnected");

  DynamicResult out;
  out.reference = eigs_sym(snapshots.front().adjacency(), k, 0.0, options.base.solver);
  out.threshold = options.base.threshold.value_or(default_threshold(n));
  std::vector<Eigen::MatrixXd> clouds;
  for (const Graph& g : snapshots) clouds.push_back(dynamic_ratios(g.adjacency(), out.reference, out.threshold));

  if (options.pool) {
    Eigen::MatrixXd stacked(n * static_cast<Index>(clouds.size()), k - 1);
    for (std::size_t t = 0; t < clouds.size(); ++t) stacked.middleRows(static_cast<Index>(t) * n, n) = clouds[t];
    const VertexSet shared = vertex_hunt(stacked, k, options.base.vh_method, options.base.vh_params, seed);
    const Eigen::VectorXd b1 = b1_from_spectra(out.reference.values, shared.vertices);
    for (Eigen::MatrixXd& cloud : clouds) {
      MembershipEstimate est;
      est.vertices = shared;
      est.b1_hat = b1;
      est.pi_hat = memberships_from_weights(cloud, shared, b1, est.fallback_rows);
      est.ratios = std::move(cloud);
      out.snapshots.push_back(std::move(est));
    }
  } else {
    for (Eigen::MatrixXd& cloud : clouds) {
      out.snapshots.push_back(estimate_from_ratios(std::move(cloud), out.reference.values, k, options.base, seed));
    }
  }
  return out;
}

std::vector<TrajectoryRow> trajectories(const DynamicResult& result) {
  std::vector<TrajectoryRow> rows;
  if (result.snapshots.empty()) return rows;
  const Eigen::MatrixXd& v = result.snapshots.front().vertices.vertices;
  const Index n = result.snapshots.front().ratios.rows();
  for (Index i = 0; i < n; ++i) {
    for (std::size_t t = 0; t < result.snapshots.size(); ++t) {
      TrajectoryRow row{i, static_cast<Index>(t) + 1, {}};
      for (Index c = 0; c < v.rows(); ++c) {
        row.distances.push_back((result.snapshots[t].ratios.row(i) - v.row(c)).norm());
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

namespace {

template <class Score>
double best_over_permutations(const Eigen::MatrixXd& pi_hat, const Eigen::MatrixXd& pi, Score score) {
  if (pi_hat.rows() != pi.rows() || pi_hat.cols() != pi.cols()) {
    throw InvalidArgument("membership comparison: shape mismatch");
  }
  const Index k = pi.cols();
  if (k > 8) throw InvalidArgument("membership comparison: permutation search limited to K <= 8");
  std::vector<Index> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), Index{0});
  double best = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd permuted(pi_hat.rows(), k);
  do {
    for (Index c = 0; c < k; ++c) permuted.col(c) = pi_hat.col(perm[c]);
    best = std::min(best, score(permuted));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace

double max_row_l1_error(const Eigen::MatrixXd& pi_hat, const Eigen::MatrixXd& pi) {
  return best_over_permutations(pi_hat, pi, [&](const Eigen::MatrixXd& p) {
    return (p - pi).cwiseAbs().rowwise().sum().maxCoeff();
  });
}

double membership_mse(const Eigen::MatrixXd& pi_hat, const Eigen::MatrixXd& pi) {
  return best_over_permutations(pi_hat, pi, [&](const Eigen::MatrixXd& p) {
    return (p - pi).rowwise().squaredNorm().mean();
  });
}

}  // namespace scorenet
