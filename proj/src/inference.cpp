#include "scorenet/inference.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <functional>
#include <sstream>

#include "scorenet/community.hpp"
#include "scorenet/error.hpp"
#include "scorenet/models.hpp"
#include "scorenet/rng.hpp"

namespace scorenet {

long long count_quadrilaterals(const Graph& g) {
  if (g.directed()) throw InvalidArgument("count_quadrilaterals: graph must be undirected");
  const Eigen::MatrixXd a = g.adjacency();
  const Eigen::MatrixXd a2 = a * a;
  const double trace4 = a2.squaredNorm();
  const Eigen::VectorXd d = g.degrees();
  return std::llround(trace4 - 2.0 * d.squaredNorm() + d.sum());
}

double signed_cycle_sum(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw InvalidArgument("signed_cycle_sum: matrix must be square");
  Eigen::MatrixXd z = m;
  z.diagonal().setZero();
  const Eigen::MatrixXd sq = z.cwiseAbs2();
  const Eigen::MatrixXd z2 = z * z;
  return z2.squaredNorm() - 2.0 * sq.rowwise().sum().squaredNorm() + sq.cwiseAbs2().sum();
}

SgnqResult sgnq(const Graph& g) {
  if (g.directed()) throw InvalidArgument("sgnq: graph must be undirected");
  const Eigen::VectorXd d = g.degrees();
  const double total = d.sum();
  if (total <= 0.0) throw InvalidArgument("sgnq: graph has no edges");
  const Eigen::VectorXd eta = d / std::sqrt(total);
  SgnqResult out;
  out.eta_norm_sq = eta.squaredNorm();
  const double s = out.eta_norm_sq - 1.0;
  if (!(s > 0.0)) {
    throw NumericalError("sgnq: ||eta||^2 = " + std::to_string(out.eta_norm_sq) + " <= 1, statistic undefined");
  }
  out.q_n = signed_cycle_sum(g.adjacency() - eta * eta.transpose());
  out.phi_n = (out.q_n - 2.0 * s * s) / std::sqrt(8.0 * s * s * s * s);
  out.p_value = 0.5 * std::erfc(out.phi_n / std::sqrt(2.0));
  return out;
}

double normal_upper_quantile(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
  return boost::math::quantile(boost::math::complement(boost::math::normal_distribution<double>(), alpha));
}

Eigen::MatrixXd fit_dcbm_plugin(const Graph& g, const std::vector<int>& labels, const PluginOptions& options) {
  const Index n = g.n();
  if (static_cast<Index>(labels.size()) != n) throw InvalidArgument("fit_dcbm_plugin: one label per node required");
  int k = 0;
  for (int l : labels) {
    if (l < 0) throw InvalidArgument("fit_dcbm_plugin: labels must be nonnegative");
    k = std::max(k, l + 1);
  }
  const Eigen::VectorXd d = g.degrees();
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(k, k);
  Eigen::VectorXd block_degree = Eigen::VectorXd::Zero(k);
  std::vector<Index> sizes(static_cast<std::size_t>(k), 0);
  for (Index i = 0; i < n; ++i) {
    block_degree(labels[i]) += d(i);
    ++sizes[labels[i]];
  }
  for (const Edge& edge : g.edges()) {
    e(labels[edge.u], labels[edge.v]) += 1.0;
    e(labels[edge.v], labels[edge.u]) += 1.0;
  }
  for (int c = 0; c < k; ++c) {
    if (sizes[c] == 0) throw InvalidArgument("fit_dcbm_plugin: cluster " + std::to_string(c) + " is empty");
    if (block_degree(c) <= 0.0) {
      throw InvalidArgument("fit_dcbm_plugin: cluster " + std::to_string(c) + " has zero total degree");
    }
  }
  const Eigen::MatrixXd rate = block_degree.cwiseInverse().asDiagonal() * e * block_degree.cwiseInverse().asDiagonal();
  Eigen::MatrixXd omega(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) omega(i, j) = d(i) * d(j) * rate(labels[i], labels[j]);
  }
  if (options.clip) omega = omega.cwiseMax(0.0).cwiseMin(1.0 - 1e-6);
  if (options.zero_diagonal) omega.diagonal().setZero();
  return omega;
}

GofStep gof_statistic(const Graph& g, const std::vector<int>& labels, long long c_n, int bootstrap,
                      std::uint64_t seed) {
  if (bootstrap < 1) throw InvalidArgument("gof_statistic: need at least one bootstrap resample");
  if (c_n <= 0) throw NumericalError("gof_statistic: graph has no quadrilaterals");
  const Eigen::MatrixXd omega = fit_dcbm_plugin(g, labels);
  GofStep out;
  out.q = signed_cycle_sum(g.adjacency() - omega);
  double total = 0.0;
  for (int rep = 0; rep < bootstrap; ++rep) {
    const Graph resample = sample_adjacency(omega, derive_seed(seed, static_cast<std::uint64_t>(rep)));
    Eigen::MatrixXd refit;
    try {
      refit = fit_dcbm_plugin(resample, labels);
    } catch (const InvalidArgument&) {
      refit = omega;
    }
    total += signed_cycle_sum(resample.adjacency() - refit);
  }
  out.bias = total / bootstrap;
  out.psi = (out.q - out.bias) / std::sqrt(8.0 * static_cast<double>(c_n));
  return out;
}

GofTrace stepwise_gof(const Graph& g, const GofOptions& options, std::uint64_t seed) {
  if (options.m_max < 1 || options.m_max > 12) throw InvalidArgument("stepwise_gof: m_max must lie in [1, 12]");
  if (!g.connected()) throw InvalidArgument("stepwise_gof: graph is disconnected; use giant_component first");
  GofTrace trace;
  trace.z_alpha = normal_upper_quantile(options.alpha);
  trace.c_n = count_quadrilaterals(g);
  const MethodConfig cfg;
  for (int m = 1; m <= options.m_max; ++m) {
    std::vector<int> labels(static_cast<std::size_t>(g.n()), 0);
    if (m > 1) labels = spectral_cluster(g, m, cfg, derive_seed(seed, static_cast<std::uint64_t>(m))).labels;
    const GofStep step =
        gof_statistic(g, labels, trace.c_n, options.bootstrap, derive_seed(seed, static_cast<std::uint64_t>(m), 1));
    trace.psi.push_back(step.psi);
    trace.q.push_back(step.q);
    trace.bias.push_back(step.bias);
    if (step.psi <= trace.z_alpha) {
      trace.k_hat = m;
      break;
    }
  }
  return trace;
}

std::vector<const TreeNode*> CommunityTree::leaves() const {
  std::vector<const TreeNode*> out;
  std::function<void(const TreeNode&)> walk = [&](const TreeNode& node) {
    if (node.children.empty()) {
      out.push_back(&node);
      return;
    }
    for (const TreeNode& child : node.children) walk(child);
  };
  walk(root);
  return out;
}

int scree_k(const Eigen::MatrixXd& adjacency, int k_max) {
  if (k_max < 2) throw InvalidArgument("scree_k: k_max must be at least 2");
  const Index want = std::min<Index>(adjacency.rows(), k_max + 1);
  const EigenPairs eig = eigs_sym(adjacency, want);
  int best = 2;
  double best_gap = -1.0;
  for (int k = 2; k < want; ++k) {
    const double lk = std::abs(eig.values(k - 1));
    const double gap = lk > 0.0 ? (lk - std::abs(eig.values(k))) / lk : 0.0;
    if (gap > best_gap + 1e-12) {
      best_gap = gap;
      best = k;
    }
  }
  return best;
}

namespace {

struct HierBuilder {
  const Graph& g;
  const HierOptions& options;
  std::uint64_t seed;
  std::uint64_t splits = 0;

  TreeNode build(std::vector<Index> members, const std::string& name, int depth) {
    TreeNode node;
    node.name = name;
    node.members = members;
    if (static_cast<Index>(members.size()) < options.min_split_size || depth >= options.max_depth) return node;

    const Component comp = giant_component(g.induced(members));
    try {
      node.p_value = sgnq(comp.graph).p_value;
    } catch (const Error&) {
      return node;
    }
    if (node.p_value > options.alpha0 || comp.graph.n() < options.min_split_size) return node;

    int k = 0;
    if (options.fixed_k.empty()) {
      k = scree_k(comp.graph.adjacency(), options.k_max);
    } else {
      k = options.fixed_k[std::min<std::size_t>(static_cast<std::size_t>(depth), options.fixed_k.size() - 1)];
    }
    k = static_cast<int>(std::min<Index>(k, comp.graph.n()));
    if (k < 2) return node;
    std::vector<int> labels;
    try {
      labels = score_star(comp.graph, k, options.c0, derive_seed(seed, splits++)).labels;
    } catch (const Error&) {
      return node;
    }

    std::vector<std::vector<Index>> groups(static_cast<std::size_t>(k));
    for (Index i = 0; i < comp.graph.n(); ++i) groups[labels[i]].push_back(members[comp.to_original[i]]);
    node.split_k = k;
    int child = 1;
    for (auto& group : groups) {
      if (group.empty()) continue;
      std::sort(group.begin(), group.end());
      node.children.push_back(build(std::move(group), name + "-" + std::to_string(child++), depth + 1));
    }
    if (comp.graph.n() < static_cast<Index>(members.size())) {
      std::vector<char> in_giant(members.size(), 0);
      for (Index i : comp.to_original) in_giant[i] = 1;
      TreeNode rest;
      rest.name = name + "-" + std::to_string(child);
      rest.residual = true;
      for (std::size_t i = 0; i < members.size(); ++i) {
        if (!in_giant[i]) rest.members.push_back(members[i]);
      }
      node.children.push_back(std::move(rest));
    }
    return node;
  }
};

}  // namespace

CommunityTree hier_score(const Graph& g, const HierOptions& options, std::uint64_t seed) {
  if (g.directed()) throw InvalidArgument("hier_score: graph must be undirected");
  if (options.min_split_size < 4) throw InvalidArgument("hier_score: minimum split size must be at least 4");
  if (!(options.alpha0 >= 0.0 && options.alpha0 <= 1.0)) throw InvalidArgument("hier_score: alpha0 must lie in [0, 1]");
  for (int k : options.fixed_k) {
    if (k < 2) throw InvalidArgument("hier_score: fixed K values must be at least 2");
  }
  const Component comp = giant_component(g);
  HierBuilder builder{g, options, seed};
  CommunityTree tree;
  tree.root = builder.build(comp.to_original, "C1", 0);
  return tree;
}

std::string tree_text(const CommunityTree& tree) {
  std::ostringstream out;
  std::function<void(const TreeNode&, int)> walk = [&](const TreeNode& node, int depth) {
    out << std::string(static_cast<std::size_t>(2 * depth), ' ') << node.name << " size=" << node.members.size()
        << " p=" << node.p_value;
    if (node.split_k > 0) out << " split=" << node.split_k;
    if (node.residual) out << " residual";
    out << '\n';
    for (const TreeNode& child : node.children) walk(child, depth + 1);
  };
  walk(tree.root, 0);
  return out.str();
}

}  // namespace scorenet
