#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scorenet/graph.hpp"

namespace scorenet {

/// Ordered 4-tuples of distinct nodes forming a closed walk i1-i2-i3-i4-i1.
/// Computed as tr(A^4) - 2 sum d_i^2 + sum d_i.
long long count_quadrilaterals(const Graph& g);

/// Sum over distinct ordered 4-tuples of M(i1,i2) M(i2,i3) M(i3,i4) M(i4,i1)
/// for a symmetric matrix; the diagonal is ignored.
double signed_cycle_sum(const Eigen::MatrixXd& m);

struct SgnqResult {
  double q_n = 0.0;
  double phi_n = 0.0;
  double eta_norm_sq = 0.0;
  double p_value = 1.0;  ///< upper tail of the standard normal at phi_n
};

/// Throws InvalidArgument when the graph has no edges, NumericalError when
/// ||eta||^2 <= 1.
SgnqResult sgnq(const Graph& g);

double normal_upper_quantile(double alpha);

struct PluginOptions {
  bool clip = true;  ///< clip to [0, 1 - 1e-6]
  bool zero_diagonal = true;
};

/// DCBM moment plug-in Omega_hat(i,j) = d_i d_j E_kl / (D_k D_l).
Eigen::MatrixXd fit_dcbm_plugin(const Graph& g, const std::vector<int>& labels, const PluginOptions& options = {});

struct GofOptions {
  double alpha = 0.05;
  int m_max = 6;
  int bootstrap = 30;
};

struct GofTrace {
  std::vector<double> psi;
  std::vector<double> q;
  std::vector<double> bias;
  std::optional<int> k_hat;
  long long c_n = 0;
  double z_alpha = 0.0;
};

struct GofStep {
  double psi = 0.0;
  double q = 0.0;
  double bias = 0.0;
};

/// psi for a given labelling: (Q - B) / sqrt(8 C_n), with B the mean of Q
/// over parametric-bootstrap resamples refitted under the same labels.
GofStep gof_statistic(const Graph& g, const std::vector<int>& labels, long long c_n, int bootstrap,
                      std::uint64_t seed);

/// Stepwise scan m = 1..m_max with SCORE labels; stops at the first psi <= z_alpha.
GofTrace stepwise_gof(const Graph& g, const GofOptions& options = {}, std::uint64_t seed = 0);

struct TreeNode {
  std::string name;  ///< C1, C1-1, C1-1-2, ...
  std::vector<Index> members;
  double p_value = 1.0;
  int split_k = 0;       ///< 0 for leaves
  bool residual = false;  ///< nodes outside the parent's giant component
  std::vector<TreeNode> children;
};

struct CommunityTree {
  TreeNode root;
  std::vector<const TreeNode*> leaves() const;
};

struct HierOptions {
  double alpha0 = 0.001;
  Index min_split_size = 20;
  int max_depth = 8;
  int k_max = 6;                  ///< scree search range 2..k_max
  std::vector<int> fixed_k;       ///< split K per depth (last entry repeats); scree when empty
  double c0 = 1.0;
};

/// Relative eigen-gap choice of K in 2..k_max from the adjacency spectrum.
int scree_k(const Eigen::MatrixXd& adjacency, int k_max);

/// The root holds the giant component of g.
CommunityTree hier_score(const Graph& g, const HierOptions& options = {}, std::uint64_t seed = 0);

/// One line per tree node, two spaces of indent per level.
std::string tree_text(const CommunityTree& tree);

}  // namespace scorenet
