#include "scorenet/community.hpp"

#include <algorithm>
#include <cmath>

#include "scorenet/error.hpp"
#include "scorenet/matching.hpp"

namespace scorenet {

void MethodConfig::validate() const {
  if (delta < 0.0) throw InvalidArgument("MethodConfig: delta must be nonnegative");
  if (post_pca == PostPca::score_q && !(q > 0.0)) throw InvalidArgument("MethodConfig: q must be positive");
  if (threshold && !(*threshold > 0.0)) throw InvalidArgument("MethodConfig: threshold must be positive");
  if (extra_eigenvector_rule && !weight_by_eigenvalue) {
    throw InvalidArgument("MethodConfig: the extra-eigenvector rule requires eigenvalue weighting");
  }
  if (extra_eigenvector_rule && *extra_eigenvector_rule < 0.0) {
    throw InvalidArgument("MethodConfig: gap threshold t must be nonnegative");
  }
}

MethodConfig MethodConfig::preset(const std::string& name) {
  MethodConfig cfg;
  if (name == "score") return cfg;
  if (name == "osc") {
    cfg.post_pca = PostPca::none;
  } else if (name == "rsc") {
    cfg.pre_pca = PrePca::laplacian_mean;
  } else if (name == "lap0" || name == "lap1") {
    cfg.pre_pca = PrePca::laplacian_mean;
    cfg.delta = name == "lap1" ? 0.05 : 0.0;
    cfg.post_pca = PostPca::none;
  } else if (name == "glm0" || name == "glm1") {
    cfg.pre_pca = PrePca::glm;
    cfg.delta = name == "glm1" ? 0.05 : 0.0;
    cfg.post_pca = PostPca::none;
  } else if (name == "score1" || name == "score2") {
    cfg.post_pca = PostPca::score_q;
    cfg.q = name == "score1" ? 1.0 : 2.0;
  } else if (name == "score_plus") {
    cfg.pre_pca = PrePca::laplacian_max;
    cfg.delta = 0.05;
    cfg.weight_by_eigenvalue = true;
    cfg.extra_eigenvector_rule = 0.1;
  } else if (name == "score_star") {
    cfg.eigen_shift = 1.0;
  } else {
    throw InvalidArgument("unknown method '" + name +
                          "' (expected score, osc, rsc, lap0, lap1, glm0, glm1, score1, score2, "
                          "score_plus, score_star)");
  }
  return cfg;
}

EigenPairs method_eigenpairs(const Graph& g, Index k, const MethodConfig& cfg) {
  cfg.validate();
  const Eigen::MatrixXd m = pre_pca_normalize(g, cfg.pre_pca, cfg.delta);
  const Index count = std::min(g.n(), k + (cfg.extra_eigenvector_rule ? 1 : 0));
  return eigs_sym(m, count, cfg.eigen_shift.value_or(0.0), cfg.solver);
}

Embedding embed(const EigenPairs& eig, Index k, const MethodConfig& cfg) {
  cfg.validate();
  if (eig.k() < k) throw InvalidArgument("embed: fewer eigenpairs than clusters");
  Embedding out;
  out.eig = eig;
  out.vectors_used = k;
  if (cfg.extra_eigenvector_rule && eig.k() > k) {
    const double t = *cfg.extra_eigenvector_rule;
    const double lk = eig.values(k - 1);
    const double lk1 = eig.values(k);
    if (t > 0.0 && lk != 0.0 && (lk - lk1) / lk <= t) out.vectors_used = k + 1;
  }
  Eigen::MatrixXd vectors = eig.vectors.leftCols(out.vectors_used);
  if (cfg.weight_by_eigenvalue) {
    for (Index c = 0; c < out.vectors_used; ++c) vectors.col(c) *= eig.values(c);
  }
  switch (cfg.post_pca) {
    case PostPca::score:
      if (out.vectors_used < 2) throw InvalidArgument("SCORE normalization needs k >= 2");
      out.threshold = cfg.threshold.value_or(default_threshold(eig.n()));
      out.points = column_ratios(vectors, out.threshold);
      break;
    case PostPca::none:
      out.points = vectors;
      break;
    case PostPca::score_q: {
      EigenPairs weighted{eig.values.head(out.vectors_used), vectors};
      out.points = scoreq_normalize(weighted, cfg.q);
      break;
    }
  }
  return out;
}

ClusterResult spectral_cluster(const Graph& g, Index k, const MethodConfig& cfg, std::uint64_t seed) {
  if (cfg.post_pca == PostPca::score && k < 2) throw InvalidArgument("spectral_cluster: SCORE needs k >= 2");
  if (k < 1) throw InvalidArgument("spectral_cluster: k must be positive");
  if (!g.connected()) {
    throw InvalidArgument("spectral_cluster: graph is disconnected; restrict it with giant_component first");
  }
  const Embedding emb = embed(method_eigenpairs(g, k, cfg), k, cfg);
  return kmeans(emb.points, k, seed, cfg.kmeans);
}

ClusterResult spectral_cluster_oracle(const Eigen::MatrixXd& omega, Index k, const MethodConfig& cfg,
                                      std::uint64_t seed) {
  if (cfg.pre_pca != PrePca::none) throw InvalidArgument("spectral_cluster_oracle: pre-PCA steps need a graph");
  if (cfg.post_pca == PostPca::score && k < 2) throw InvalidArgument("spectral_cluster_oracle: SCORE needs k >= 2");
  const Index count = std::min(omega.rows(), k + (cfg.extra_eigenvector_rule ? 1 : 0));
  const EigenPairs eig = eigs_sym(omega, count, cfg.eigen_shift.value_or(0.0), cfg.solver);
  return kmeans(embed(eig, k, cfg).points, k, seed, cfg.kmeans);
}

ClusterResult score_plus(const Graph& g, Index k, double t, double delta, std::uint64_t seed) {
  MethodConfig cfg = MethodConfig::preset("score_plus");
  cfg.extra_eigenvector_rule = t;
  cfg.delta = delta;
  return spectral_cluster(g, k, cfg, seed);
}

ClusterResult score_star(const Graph& g, Index k, double c0, std::uint64_t seed) {
  MethodConfig cfg;
  cfg.eigen_shift = c0;
  return spectral_cluster(g, k, cfg, seed);
}

DScoreResult dscore(const Graph& g, Index k, std::optional<double> threshold, std::uint64_t seed) {
  if (k < 2) throw InvalidArgument("dscore: k must be at least 2");
  const Index n = g.n();
  if (k > n) throw InvalidArgument("dscore: k exceeds the node count");
  const double t = threshold.value_or(default_threshold(n));
  if (!(t > 0.0)) throw InvalidArgument("dscore: threshold must be positive");
  const SingularTriplets svd = svd_top(g.adjacency(), k);

  auto support_ratios = [&](const Eigen::MatrixXd& vectors, std::vector<char>& support) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, k - 1);
    support.assign(static_cast<std::size_t>(n), 0);
    for (Index i = 0; i < n; ++i) {
      const double den = vectors(i, 0);
      if (std::abs(den) <= 1e-12) continue;
      support[i] = 1;
      for (Index c = 0; c < k - 1; ++c) {
        const double r = vectors(i, c + 1) / den;
        out(i, c) = std::copysign(std::min(t, std::abs(r)), r);
      }
    }
    return out;
  };
  std::vector<char> left_support, right_support;
  DScoreResult out;
  out.embedding.resize(n, 2 * (k - 1));
  out.embedding.leftCols(k - 1) = support_ratios(svd.left, left_support);
  out.embedding.rightCols(k - 1) = support_ratios(svd.right, right_support);
  for (Index i = 0; i < n; ++i) {
    if (!(left_support[i] && right_support[i])) ++out.off_support;
  }
  out.clusters = kmeans(out.embedding, k, seed);
  return out;
}

namespace {

Eigen::MatrixXd confusion(const std::vector<int>& labels, const std::vector<int>& truth, Index& classes) {
  if (labels.size() != truth.size()) throw InvalidArgument("hamming_error: label vectors differ in length");
  int top = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || truth[i] < 0) throw InvalidArgument("hamming_error: labels must be nonnegative");
    top = std::max({top, labels[i], truth[i]});
  }
  classes = top + 1;
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(classes, classes);
  for (std::size_t i = 0; i < labels.size(); ++i) c(labels[i], truth[i]) += 1.0;
  return c;
}

}  // namespace

HammingError hamming_error(const std::vector<int>& labels, const std::vector<int>& truth) {
  Index classes = 0;
  const Eigen::MatrixXd c = confusion(labels, truth, classes);
  const auto assignment = min_cost_assignment(-c);
  double matched = 0.0;
  for (Index a = 0; a < classes; ++a) matched += c(a, assignment[a]);
  HammingError out;
  out.count = static_cast<Index>(labels.size()) - static_cast<Index>(std::llround(matched));
  out.rate = labels.empty() ? 0.0 : static_cast<double>(out.count) / static_cast<double>(labels.size());
  return out;
}

std::vector<int> align_labels(const std::vector<int>& labels, const std::vector<int>& truth) {
  Index classes = 0;
  const Eigen::MatrixXd c = confusion(labels, truth, classes);
  const auto assignment = min_cost_assignment(-c);
  std::vector<int> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) out[i] = static_cast<int>(assignment[labels[i]]);
  return out;
}

}  // namespace scorenet
