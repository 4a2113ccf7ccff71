#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "scorenet/error.hpp"
#include "scorenet/inference.hpp"
#include "scorenet/models.hpp"
#include "scorenet/rng.hpp"
#include "test_support.hpp"

namespace scorenet {
namespace {

long long brute_force_quadrilaterals(const Eigen::MatrixXd& a) {
  const Index n = a.rows();
  long long count = 0;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      for (Index k = 0; k < n; ++k)
        for (Index l = 0; l < n; ++l) {
          if (i == j || i == k || i == l || j == k || j == l || k == l) continue;
          count += static_cast<long long>(a(i, j) * a(j, k) * a(k, l) * a(l, i));
        }
  return count;
}

double naive_signed_sum(const Eigen::MatrixXd& m) {
  const Index n = m.rows();
  double total = 0.0;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      for (Index k = 0; k < n; ++k)
        for (Index l = 0; l < n; ++l) {
          if (i == j || i == k || i == l || j == k || j == l || k == l) continue;
          total += m(i, j) * m(j, k) * m(k, l) * m(l, i);
        }
  return total;
}

Graph permuted(const Graph& g, const std::vector<Index>& perm) {
  std::vector<Edge> edges;
  for (const Edge& e : g.edges()) edges.push_back({perm[e.u], perm[e.v]});
  return Graph(g.n(), edges);
}

std::vector<Index> random_permutation(Index n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Index> perm(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) perm[i] = i;
  for (Index i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(static_cast<std::uint64_t>(i) + 1)]);
  return perm;
}

Graph planted_hierarchy(std::uint64_t seed) {
  Eigen::MatrixXd p(4, 4);
  p << 1.0, 0.2, 0.03, 0.03,
       0.2, 1.0, 0.03, 0.03,
       0.03, 0.03, 1.0, 0.2,
       0.03, 0.03, 0.2, 1.0;
  DcmmParams params;
  params.theta = Eigen::VectorXd::Constant(400, 0.45);
  params.pi = Eigen::MatrixXd::Zero(400, 4);
  for (Index i = 0; i < 400; ++i) params.pi(i, i / 100) = 1.0;
  params.p_matrix = p;
  return sample_dcmm(params, seed);
}

TEST(Quadrilaterals, SmallExamples) {
  EXPECT_EQ(count_quadrilaterals(Graph(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}})), 8);
  EXPECT_EQ(count_quadrilaterals(Graph(3, {{0, 1}, {1, 2}, {2, 0}})), 0);
}

TEST(QuadrilateralsProperty, ClosedFormMatchesEnumeration) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Graph g = testing::random_graph(6 + static_cast<Index>(seed % 7), 0.5, seed);
    EXPECT_EQ(count_quadrilaterals(g), brute_force_quadrilaterals(g.adjacency())) << "seed " << seed;
  }
}

TEST(SignedCycleSumProperty, MatchesNaiveLoop) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const Index n = 4 + static_cast<Index>(seed % 7);
    const Eigen::MatrixXd m = testing::random_symmetric(n, seed);
    const double naive = naive_signed_sum(m);
    EXPECT_NEAR(signed_cycle_sum(m), naive, 1e-9 * std::max(1.0, std::abs(naive)));
  }
}

TEST(SignedCycleSumProperty, SgnqCycleSumMatchesNaiveOnGraphs) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = testing::random_graph(10, 0.5, seed + 50);
    const Eigen::VectorXd d = g.degrees();
    if (d.sum() == 0) continue;
    const Eigen::VectorXd eta = d / std::sqrt(d.sum());
    Eigen::MatrixXd star = g.adjacency() - eta * eta.transpose();
    star.diagonal().setZero();
    const double naive = naive_signed_sum(star);
    if (eta.squaredNorm() <= 1.0) continue;
    EXPECT_NEAR(sgnq(g).q_n, naive, 1e-9 * std::max(1.0, std::abs(naive)));
  }
}

TEST(Sgnq, Errors) {
  EXPECT_THROW(sgnq(Graph(3, {})), InvalidArgument);
  EXPECT_THROW(sgnq(Graph(2, {{0, 1}})), NumericalError);
}

TEST(Sgnq, PValueIsNormalTail) {
  const Graph g = testing::random_connected_graph(60, 0.1, 4);
  const SgnqResult r = sgnq(g);
  EXPECT_NEAR(r.p_value, 0.5 * std::erfc(r.phi_n / std::sqrt(2.0)), 1e-15);
  const double s = r.eta_norm_sq - 1.0;
  EXPECT_NEAR(r.phi_n, (r.q_n - 2 * s * s) / std::sqrt(8 * std::pow(s, 4)), 1e-9 * std::abs(r.phi_n) + 1e-12);
}

TEST(SgnqProperty, EtaNormAtLeastOne) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Graph g = testing::random_graph(15, 0.3, seed);
    if (g.edges().empty()) continue;
    const Eigen::VectorXd d = g.degrees();
    EXPECT_GE((d / std::sqrt(d.sum())).squaredNorm(), 1.0 - 1e-12);
  }
}

TEST(SgnqProperty, RelabelingInvariance) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Graph g = testing::random_connected_graph(50, 0.12, seed);
    const SgnqResult a = sgnq(g);
    const SgnqResult b = sgnq(permuted(g, random_permutation(50, seed + 9)));
    EXPECT_NEAR(a.q_n, b.q_n, 1e-8 * std::max(1.0, std::abs(a.q_n)));
    EXPECT_NEAR(a.phi_n, b.phi_n, 1e-8 * std::max(1.0, std::abs(a.phi_n)));
  }
}

TEST(Sgnq, StrongTwoCommunitySignalRejects) {
  int rejections = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const DcmmParams params = balanced_dcbm(Eigen::VectorXd::Constant(200, 0.5), 2, 0.1);
    if (sgnq(sample_dcmm(params, seed)).phi_n > 3.0) ++rejections;
  }
  EXPECT_GE(rejections, 95);
}

TEST(NormalQuantile, KnownValues) {
  EXPECT_NEAR(normal_upper_quantile(0.05), 1.6448536269514722, 1e-12);
  EXPECT_NEAR(normal_upper_quantile(0.5), 0.0, 1e-15);
  EXPECT_THROW(normal_upper_quantile(0.0), InvalidArgument);
}

TEST(Plugin, PathGraphByHand) {
  const Graph g(3, {{0, 1}, {1, 2}});
  const Eigen::MatrixXd omega = fit_dcbm_plugin(g, {0, 0, 0});
  EXPECT_NEAR(omega(0, 1), 0.5, 1e-15);
  EXPECT_NEAR(omega(0, 2), 0.25, 1e-15);
  EXPECT_EQ(omega(1, 1), 0.0);
}

TEST(Plugin, RegularGraphIsConstant) {
  std::vector<Edge> cycle;
  for (Index i = 0; i < 10; ++i) cycle.push_back({i, (i + 1) % 10});
  const Eigen::MatrixXd omega = fit_dcbm_plugin(Graph(10, cycle), std::vector<int>(10, 0));
  EXPECT_NEAR(omega(0, 5), 0.2, 1e-15);
  EXPECT_NEAR(omega(3, 7), 0.2, 1e-15);
}

TEST(PluginProperty, RowSumsEqualDegrees) {
  const PluginOptions raw{false, false};
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = testing::random_connected_graph(40, 0.1, seed);
    std::vector<int> labels(40);
    for (Index i = 0; i < 40; ++i) labels[i] = static_cast<int>(i % 3);
    const Eigen::MatrixXd omega = fit_dcbm_plugin(g, labels, raw);
    EXPECT_LT((omega.rowwise().sum() - g.degrees()).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(PluginProperty, PermutationInvarianceAndEquivariance) {
  const Graph g = testing::random_connected_graph(30, 0.15, 2);
  std::vector<int> labels(30);
  for (Index i = 0; i < 30; ++i) labels[i] = static_cast<int>(i % 2);
  const Eigen::MatrixXd base = fit_dcbm_plugin(g, labels);
  std::vector<int> swapped = labels;
  for (int& l : swapped) l = 1 - l;
  EXPECT_LT((fit_dcbm_plugin(g, swapped) - base).cwiseAbs().maxCoeff(), 1e-15);
  const std::vector<Index> perm = random_permutation(30, 7);
  std::vector<int> moved_labels(30);
  for (Index i = 0; i < 30; ++i) moved_labels[perm[i]] = labels[i];
  const Eigen::MatrixXd moved = fit_dcbm_plugin(permuted(g, perm), moved_labels);
  for (Index i = 0; i < 30; ++i) {
    for (Index j = 0; j < 30; ++j) EXPECT_NEAR(moved(perm[i], perm[j]), base(i, j), 1e-14);
  }
}

TEST(Plugin, EmptyOrZeroDegreeClusterThrows) {
  const Graph g(4, {{0, 1}, {1, 2}});
  EXPECT_THROW(fit_dcbm_plugin(g, {0, 0, 2, 2}), InvalidArgument);
  EXPECT_THROW(fit_dcbm_plugin(g, {0, 0, 0, 1}), InvalidArgument);
}

TEST(GofProperty, TraceConsistentWithStoppingRule) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const DcmmParams params = balanced_dcbm(Eigen::VectorXd::LinSpaced(300, 0.5, 1.0), 2, 0.1);
    const Graph g = giant_component(sample_dcmm(params, seed)).graph;
    GofOptions o;
    o.bootstrap = 10;
    const GofTrace trace = stepwise_gof(g, o, seed);
    EXPECT_EQ(trace.c_n, count_quadrilaterals(g));
    if (trace.k_hat) {
      ASSERT_EQ(trace.psi.size(), static_cast<std::size_t>(*trace.k_hat));
      EXPECT_LE(trace.psi.back(), trace.z_alpha);
      for (std::size_t m = 0; m + 1 < trace.psi.size(); ++m) EXPECT_GT(trace.psi[m], trace.z_alpha);
    } else {
      for (double psi : trace.psi) EXPECT_GT(psi, trace.z_alpha);
    }
  }
}

TEST(Gof, ReproducibleAndValidated) {
  const Graph g = testing::random_connected_graph(80, 0.1, 3);
  GofOptions o;
  o.bootstrap = 5;
  o.m_max = 2;
  EXPECT_EQ(stepwise_gof(g, o, 4).psi, stepwise_gof(g, o, 4).psi);
  o.m_max = 13;
  EXPECT_THROW(stepwise_gof(g, o), InvalidArgument);
  EXPECT_THROW(gof_statistic(g, std::vector<int>(80, 0), 10, 0, 1), InvalidArgument);
}

TEST(Hier, SingleCommunityIsOneLeaf) {
  const DcmmParams params = balanced_dcbm(Eigen::VectorXd::Constant(200, 0.3), 1, 0.0);
  const CommunityTree tree = hier_score(sample_dcmm(params, 5));
  EXPECT_TRUE(tree.root.children.empty());
  EXPECT_GT(tree.root.p_value, 0.001);
  EXPECT_EQ(tree.leaves().size(), 1u);
}

TEST(Hier, ZeroAlphaKeepsRootWhole) {
  HierOptions o;
  o.alpha0 = 0.0;
  const DcmmParams params = balanced_dcbm(Eigen::VectorXd::Constant(200, 0.3), 1, 0.0);
  EXPECT_TRUE(hier_score(sample_dcmm(params, 2), o).root.children.empty());
  o.alpha0 = 1.5;
  EXPECT_THROW(hier_score(sample_dcmm(params, 2), o), InvalidArgument);
}

TEST(Hier, UnitAlphaSplitsEvenWithoutStructure) {
  HierOptions o;
  o.alpha0 = 1.0;
  o.fixed_k = {2};
  o.max_depth = 1;
  const DcmmParams params = balanced_dcbm(Eigen::VectorXd::Constant(200, 0.3), 1, 0.0);
  EXPECT_EQ(hier_score(sample_dcmm(params, 2), o).root.split_k, 2);
}

TEST(Hier, PlantedHierarchyRecovered) {
  HierOptions o;
  o.fixed_k = {2};
  int recovered = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const CommunityTree tree = hier_score(planted_hierarchy(seed), o, seed);
    bool ok = tree.root.children.size() == 2;
    for (const TreeNode& child : tree.root.children) {
      ok = ok && child.children.size() == 2;
      for (const TreeNode& leaf : child.children) {
        ok = ok && leaf.children.empty();
        std::map<Index, int> blocks;
        for (Index m : leaf.members) ++blocks[m / 100];
        ok = ok && blocks.size() == 1 && leaf.members.size() == 100;
      }
    }
    recovered += ok;
  }
  EXPECT_GE(recovered, 40);
}

TEST(HierProperty, LeavesPartitionRoot) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const CommunityTree tree = hier_score(planted_hierarchy(seed + 100), {}, seed);
    std::vector<Index> all;
    for (const TreeNode* leaf : tree.leaves()) {
      EXPECT_TRUE(leaf->children.empty());
      all.insert(all.end(), leaf->members.begin(), leaf->members.end());
    }
    std::sort(all.begin(), all.end());
    std::vector<Index> root = tree.root.members;
    std::sort(root.begin(), root.end());
    EXPECT_EQ(all, root);
  }
}

TEST(Hier, TreeTextIndentsByDepth) {
  HierOptions o;
  o.fixed_k = {2};
  const CommunityTree tree = hier_score(planted_hierarchy(1), o, 1);
  const std::string text = tree_text(tree);
  EXPECT_EQ(text.rfind("C1 size=400", 0), 0u);
  EXPECT_NE(text.find("\n  C1-1 size="), std::string::npos);
  EXPECT_NE(text.find("\n    C1-1-1 size="), std::string::npos);
}

TEST(Scree, PicksLargestRelativeGap) {
  const Eigen::MatrixXd m = Eigen::Vector4d(10, 9, 8, 1).asDiagonal();
  EXPECT_EQ(scree_k(m, 3), 3);
  EXPECT_THROW(scree_k(m, 1), InvalidArgument);
}

}  // namespace
}  // namespace scorenet
