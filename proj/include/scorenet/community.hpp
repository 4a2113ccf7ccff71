#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scorenet/graph.hpp"
#include "scorenet/kmeans.hpp"
#include "scorenet/spectra.hpp"

namespace scorenet {

enum class PostPca {
  score,    ///< thresholded eigenvector ratios (SCORE)
  none,     ///< raw leading eigenvectors (ordinary spectral clustering)
  score_q,  ///< rows divided by their l^q norm
};

/// One configuration covers SCORE, OSC, RSC, the Laplacian and GLM
/// approaches, SCORE_q, SCORE+ and SCORE*.
struct MethodConfig {
  PrePca pre_pca = PrePca::none;
  double delta = 0.0;
  PostPca post_pca = PostPca::score;
  std::optional<double> threshold;  ///< T for the score step; default log n rule
  double q = 2.0;                   ///< for score_q
  bool weight_by_eigenvalue = false;
  /// Gap threshold t: one extra eigenvector is used when
  /// (lambda_K - lambda_{K+1}) / lambda_K <= t. Requires weight_by_eigenvalue.
  std::optional<double> extra_eigenvector_rule;
  /// c0: eigenpairs are ranked by |lambda + c0| instead of |lambda|.
  std::optional<double> eigen_shift;
  EigenSolver solver = EigenSolver::automatic;
  KMeansOptions kmeans;

  void validate() const;

  /// Preset by name: score, osc, rsc, lap0, lap1, glm0, glm1, score1, score2,
  /// score_plus, score_star. Throws InvalidArgument for unknown names.
  static MethodConfig preset(const std::string& name);
};

/// Spectral embedding handed to k-means.
struct Embedding {
  EigenPairs eig;           ///< all eigenpairs computed (K or K+1)
  Index vectors_used = 0;   ///< M: eigenvectors entering the embedding
  Eigen::MatrixXd points;   ///< n x (M-1) for score, n x M otherwise
  double threshold = 0.0;   ///< T applied (score only)
};

/// Eigenpairs of the pre-PCA matrix that `cfg` asks for (K, or K+1 when the
/// extra-eigenvector rule is on).
EigenPairs method_eigenpairs(const Graph& g, Index k, const MethodConfig& cfg);

/// Applies the extra-eigenvector rule, eigenvalue weighting and the post-PCA
/// step to precomputed eigenpairs.
Embedding embed(const EigenPairs& eig, Index k, const MethodConfig& cfg);

/// Full pipeline: pre-PCA, eigenpairs, post-PCA, k-means into k clusters.
/// Throws InvalidArgument on a disconnected graph (see giant_component) or
/// k < 2 with the score step.
ClusterResult spectral_cluster(const Graph& g, Index k, const MethodConfig& cfg, std::uint64_t seed);

/// SCORE applied to a noiseless expected adjacency instead of a sample.
ClusterResult spectral_cluster_oracle(const Eigen::MatrixXd& omega, Index k, const MethodConfig& cfg,
                                      std::uint64_t seed);

/// SCORE+: Laplacian with max-degree ridge, eigenvalue-weighted ratios and a
/// possible (K+1)-th eigenvector.
ClusterResult score_plus(const Graph& g, Index k, double t = 0.1, double delta = 0.05, std::uint64_t seed = 0);

/// SCORE*: SCORE with eigenpairs ranked by |lambda + c0|.
ClusterResult score_star(const Graph& g, Index k, double c0 = 1.0, std::uint64_t seed = 0);

struct DScoreResult {
  ClusterResult clusters;
  Eigen::MatrixXd embedding;  ///< n x (2K-2): [U_hat, V_hat]
  Index off_support = 0;      ///< nodes outside the intersection of both supports
};

/// D-SCORE for directed graphs: thresholded singular-vector ratios on the
/// supports of the leading left/right singular vectors, zero rows elsewhere.
DScoreResult dscore(const Graph& g, Index k, std::optional<double> threshold = std::nullopt,
                    std::uint64_t seed = 0);

struct HammingError {
  Index count = 0;
  double rate = 0.0;
};

/// Misclassification count minimised over relabelings of `labels`.
HammingError hamming_error(const std::vector<int>& labels, const std::vector<int>& truth);

/// Relabel `labels` onto `truth` with the optimal matching.
std::vector<int> align_labels(const std::vector<int>& labels, const std::vector<int>& truth);

}  // namespace scorenet
