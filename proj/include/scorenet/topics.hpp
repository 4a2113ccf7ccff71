#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "scorenet/io.hpp"
#include "scorenet/models.hpp"
#include "scorenet/vertex_hunt.hpp"

namespace scorenet {

struct TopicEstimate {
  Eigen::MatrixXd a_hat;  ///< p x K, columns are PMFs; dropped words have zero rows
  Eigen::MatrixXd w_hat;  ///< K x n, columns are PMFs
  Eigen::MatrixXd alpha;  ///< p x K barycentric word weights after clipping (zero for dropped words)
  VertexSet vertices;
  std::vector<Index> dropped_words;
};

struct TopicOptions {
  VhMethod vh_method = VhMethod::svs_plus;
  VhParams vh_params;
  std::optional<double> threshold;  ///< clip word-space ratios at +-T; no clipping by default
};

TopicEstimate topic_score(const Corpus& corpus, Index k, const TopicOptions& options = {}, std::uint64_t seed = 0);

struct TopicAnchors {
  std::vector<Index> words;  ///< indices into the vocabulary, best first
  std::vector<double> scores;
  bool weak = false;  ///< best score below 0.5: no clear anchor word
};

/// Per topic, words ranked by alpha_j(k) - max_{l != k} alpha_j(l).
std::vector<TopicAnchors> anchor_diagnostics(const TopicEstimate& estimate, Index top_m);

struct TrScoreResult {
  Eigen::VectorXd mu;        ///< sums to zero
  std::vector<Index> ranking;  ///< topics by descending mu
  double gradient_norm = 0.0;
  int iterations = 0;
};

/// Logistic fit of P(i cites j | exchange) = sigmoid(mu' (w_i - w_j)) with
/// sum(mu) = 0. Throws NumericalError on complete separation.
TrScoreResult tr_score(const Eigen::MatrixXd& w_hat, const CitationPairs& citations);

/// Columnwise l1 error of a_hat against truth, minimised over column permutations.
double topic_l1_error(const Eigen::MatrixXd& a_hat, const Eigen::MatrixXd& a_true);

}  // namespace scorenet
