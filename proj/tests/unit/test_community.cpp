#include <gtest/gtest.h>

#include <algorithm>
#include <limits>

#include "scorenet/community.hpp"
#include "scorenet/error.hpp"
#include "scorenet/io.hpp"
#include "scorenet/matching.hpp"
#include "scorenet/models.hpp"
#include "test_support.hpp"

namespace scorenet {
namespace {

Eigen::MatrixXd blobs(Index per, const Eigen::MatrixXd& centers, double spread, std::uint64_t seed) {
  Eigen::MatrixXd noise = testing::random_matrix(per * centers.rows(), centers.cols(), seed) * spread;
  for (Index i = 0; i < noise.rows(); ++i) noise.row(i) += centers.row(i / per);
  return noise;
}

double bitmask_assignment_cost(const Eigen::MatrixXd& cost) {
  const Index n = cost.rows();
  std::vector<double> best(std::size_t{1} << n, std::numeric_limits<double>::infinity());
  best[0] = 0.0;
  for (std::size_t mask = 0; mask < best.size(); ++mask) {
    const Index row = __builtin_popcountll(mask);
    if (row >= n) continue;
    for (Index c = 0; c < n; ++c) {
      if (mask & (std::size_t{1} << c)) continue;
      auto& next = best[mask | (std::size_t{1} << c)];
      next = std::min(next, best[mask] + cost(row, c));
    }
  }
  return best.back();
}

TEST(KMeans, TwoObviousClusters) {
  Eigen::MatrixXd pts(4, 1);
  pts << 0, 0.1, 10, 10.1;
  const ClusterResult r = kmeans(pts, 2, 0);
  EXPECT_EQ(r.labels, (std::vector<int>{0, 0, 1, 1}));
  EXPECT_NEAR(r.inertia, 0.01, 1e-12);
}

TEST(KMeans, SingleClusterCenterIsMean) {
  Eigen::MatrixXd pts(3, 2);
  pts << 0, 0, 2, 0, 1, 3;
  const ClusterResult r = kmeans(pts, 1, 5);
  EXPECT_NEAR(r.centers(0, 0), 1.0, 1e-14);
  EXPECT_NEAR(r.centers(0, 1), 1.0, 1e-14);
}

TEST(KMeans, RejectsTooManyClusters) {
  EXPECT_THROW(kmeans(Eigen::MatrixXd::Zero(3, 2), 4, 0), InvalidArgument);
}

TEST(KMeansProperty, InertiaMonotoneAndMatchesCost) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Eigen::MatrixXd pts = testing::random_matrix(80, 3, seed);
    const ClusterResult r = kmeans(pts, 4, seed);
    for (std::size_t i = 1; i < r.inertia_trace.size(); ++i) {
      EXPECT_LE(r.inertia_trace[i], r.inertia_trace[i - 1] + 1e-9);
    }
    EXPECT_NEAR(r.inertia, assignment_cost(pts, r.labels, r.centers), 1e-9);
    EXPECT_EQ(r.labels.front(), 0);
  }
}

TEST(KMeansProperty, SeparatedBlobsRecovered) {
  Eigen::MatrixXd centers(3, 2);
  centers << 0, 0, 10, 0, 0, 10;
  std::vector<int> truth;
  for (int c = 0; c < 3; ++c) truth.insert(truth.end(), 30, c);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const ClusterResult r = kmeans(blobs(30, centers, 0.5, seed), 3, seed);
    EXPECT_EQ(hamming_error(r.labels, truth).count, 0) << "seed " << seed;
  }
}

TEST(Hamming, Examples) {
  EXPECT_EQ(hamming_error({1, 1, 0, 0}, {0, 0, 1, 1}).count, 0);
  const HammingError e = hamming_error({0, 0, 0, 1}, {0, 0, 1, 1});
  EXPECT_EQ(e.count, 1);
  EXPECT_DOUBLE_EQ(e.rate, 0.25);
  EXPECT_THROW(hamming_error({0, 1}, {0, 1, 1}), InvalidArgument);
}

TEST(Hamming, AlignLabels) {
  EXPECT_EQ(align_labels({2, 2, 0, 1}, {0, 0, 1, 2}), (std::vector<int>{0, 0, 1, 2}));
}

TEST(MatchingProperty, HungarianMatchesBitmaskOracle) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Eigen::MatrixXd cost = testing::random_matrix(12, 12, seed).cwiseAbs();
    const std::vector<Index> assign = min_cost_assignment(cost);
    double total = 0.0;
    std::vector<Index> cols = assign;
    std::sort(cols.begin(), cols.end());
    for (Index i = 0; i < 12; ++i) {
      total += cost(i, assign[i]);
      EXPECT_EQ(cols[i], i);
    }
    EXPECT_NEAR(total, bitmask_assignment_cost(cost), 1e-12);
  }
}

TEST(MatchingProperty, SmallExhaustiveMatchesBitmaskOracle) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Eigen::MatrixXd cost = testing::random_matrix(6, 6, seed + 100);
    const std::vector<Index> assign = min_cost_assignment(cost);
    double total = 0.0;
    for (Index i = 0; i < 6; ++i) total += cost(i, assign[i]);
    EXPECT_NEAR(total, bitmask_assignment_cost(cost), 1e-12);
  }
}

TEST(Bottleneck, MinimisesLargestCost) {
  Eigen::Matrix3d cost;
  cost << 1, 9, 9, 9, 1, 2, 9, 2, 100;
  const auto a = bottleneck_assignment(cost);
  double worst = 0.0;
  for (Index i = 0; i < 3; ++i) worst = std::max(worst, cost(i, a[i]));
  EXPECT_EQ(worst, 2.0);
}

TEST(Score, KarateFactions) {
  const Graph g = load_edge_list(testing::fixture("karate.edges"));
  const std::vector<int> truth = load_labels(testing::fixture("karate_factions.csv"), g.n());
  const ClusterResult r = spectral_cluster(g, 2, MethodConfig::preset("score"), 0);
  EXPECT_EQ(hamming_error(r.labels, truth).count, 0);
}

TEST(Score, OracleDcbmIsExact) {
  const DcmmParams params = balanced_dcbm(Eigen::VectorXd::LinSpaced(90, 0.05, 0.9), 3, 0.2);
  const Eigen::MatrixXd omega = expected_adjacency(params).omega;
  const ClusterResult r = spectral_cluster_oracle(omega, 3, MethodConfig::preset("score"), 4);
  EXPECT_EQ(hamming_error(r.labels, dominant_labels(params.pi)).count, 0);
}

TEST(Score, RejectsDisconnectedGraph) {
  const Graph g(4, {{0, 1}, {2, 3}});
  EXPECT_THROW(spectral_cluster(g, 2, MethodConfig::preset("score"), 0), InvalidArgument);
}

TEST(Score, RejectsSingleCluster) {
  const Graph g = testing::random_connected_graph(20, 0.2, 1);
  EXPECT_THROW(spectral_cluster(g, 1, MethodConfig::preset("score"), 0), InvalidArgument);
}

TEST(ScoreProperty, EigenvectorSignFlipInvariance) {
  const DcmmParams params = heterogeneous_two_block(300, 1.0, 0.2, 1.0, 8);
  const Graph g = giant_component(sample_dcmm(params, 9)).graph;
  const MethodConfig cfg = MethodConfig::preset("score");
  EigenPairs eig = method_eigenpairs(g, 2, cfg);
  const ClusterResult a = kmeans(embed(eig, 2, cfg).points, 2, 3);
  eig.vectors *= -1.0;
  const ClusterResult b = kmeans(embed(eig, 2, cfg).points, 2, 3);
  EXPECT_EQ(a.labels, b.labels);
}

TEST(Presets, KnownAndUnknown) {
  EXPECT_EQ(MethodConfig::preset("osc").post_pca, PostPca::none);
  EXPECT_EQ(MethodConfig::preset("rsc").pre_pca, PrePca::laplacian_mean);
  EXPECT_EQ(MethodConfig::preset("glm1").delta, 0.05);
  EXPECT_EQ(MethodConfig::preset("score1").q, 1.0);
  EXPECT_EQ(MethodConfig::preset("score_star").eigen_shift, 1.0);
  const MethodConfig plus = MethodConfig::preset("score_plus");
  EXPECT_EQ(plus.pre_pca, PrePca::laplacian_max);
  EXPECT_TRUE(plus.weight_by_eigenvalue);
  EXPECT_THROW(MethodConfig::preset("spectral"), InvalidArgument);
}

TEST(Presets, AllRunOnKarate) {
  const Graph g = load_edge_list(testing::fixture("karate.edges"));
  for (const char* name : {"score", "osc", "rsc", "lap0", "lap1", "glm0", "glm1", "score1", "score2",
                           "score_plus", "score_star"}) {
    const ClusterResult r = spectral_cluster(g, 2, MethodConfig::preset(name), 0);
    EXPECT_EQ(r.labels.size(), 34u) << name;
  }
}

TEST(ScoreStar, ZeroShiftEqualsScore) {
  const Graph g = load_edge_list(testing::fixture("karate.edges"));
  EXPECT_EQ(score_star(g, 2, 0.0, 7).labels, spectral_cluster(g, 2, MethodConfig::preset("score"), 7).labels);
}

TEST(ScorePlus, ExtraEigenvectorRule) {
  EigenPairs eig{Eigen::Vector3d(10, 4, 3.8), testing::random_orthogonal(20, 2).leftCols(3)};
  eig.vectors.col(0) = eig.vectors.col(0).cwiseAbs().array() + 0.1;
  MethodConfig cfg = MethodConfig::preset("score_plus");
  cfg.extra_eigenvector_rule = 0.0;
  EXPECT_EQ(embed(eig, 2, cfg).vectors_used, 2);
  cfg.extra_eigenvector_rule = 0.1;
  const Embedding used = embed(eig, 2, cfg);
  EXPECT_EQ(used.vectors_used, 3);
  EXPECT_EQ(used.points.cols(), 2);
  cfg.extra_eigenvector_rule = 0.01;
  EXPECT_EQ(embed(eig, 2, cfg).vectors_used, 2);
}

TEST(ScorePlus, StrongSignalRecovered) {
  const DcmmParams params = balanced_dcbm(Eigen::VectorXd::Constant(200, 0.5), 2, 0.1);
  const Graph g = giant_component(sample_dcmm(params, 3)).graph;
  const ClusterResult r = score_plus(g, 2, 0.1, 0.05, 1);
  EXPECT_LE(hamming_error(r.labels, dominant_labels(params.pi)).rate, 0.02);
}

TEST(DScore, SymmetricInputHasEqualHalves) {
  const Graph g = load_edge_list(testing::fixture("karate.edges"));
  const DScoreResult r = dscore(g, 2);
  EXPECT_LT((r.embedding.leftCols(1) - r.embedding.rightCols(1)).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(DScore, OffSupportRowsAreZero) {
  const Graph g(5, {{0, 1}, {1, 2}, {2, 0}, {0, 3}, {3, 1}}, true);
  const DScoreResult r = dscore(g, 2);
  EXPECT_GT(r.off_support, 0);
  EXPECT_EQ(r.embedding.row(4).norm(), 0.0);
}

TEST(DScore, DirectedBlocksRecovered) {
  Eigen::MatrixXd omega(200, 200);
  for (Index i = 0; i < 200; ++i) {
    for (Index j = 0; j < 200; ++j) omega(i, j) = (i < 100) == (j < 100) ? 0.3 : 0.05;
  }
  omega.diagonal().setZero();
  const Graph g = sample_directed(omega, 11);
  std::vector<int> truth(200, 0);
  std::fill(truth.begin() + 100, truth.end(), 1);
  EXPECT_EQ(hamming_error(dscore(g, 2, std::nullopt, 2).clusters.labels, truth).count, 0);
}

}  // namespace
}  // namespace scorenet
