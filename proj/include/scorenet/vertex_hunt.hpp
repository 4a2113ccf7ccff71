#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>

#include "scorenet/graph.hpp"

namespace scorenet {

enum class VhMethod { sp, cvs, svs0, svs_star, svs_plus };

VhMethod parse_vh_method(const std::string& name);
std::string to_string(VhMethod method);

/// Estimated simplex vertices, one per row, in lexicographic row order.
struct VertexSet {
  Eigen::MatrixXd vertices;  ///< k x d
  VhMethod method = VhMethod::sp;
  Index candidate_count = 0;  ///< points entering the second stage
  double max_residual = 0.0;  ///< largest distance from a candidate to the hull

  Index k() const { return vertices.rows(); }
};

struct VhParams {
  std::optional<Index> local_centers;  ///< L for svs0 / svs_star
  Index knn_min_neighbors = 3;         ///< m for svs_plus
  std::optional<Index> knn_average;    ///< N for svs_plus; default ceil(n/10)
};

/// Euclidean distance from x to the convex hull of the rows of `vertices`.
double distance_to_hull(const Eigen::VectorXd& x, const Eigen::MatrixXd& vertices);

/// k-dimensional volume of the simplex spanned by the rows, divided by
/// diameter^(k-1) so that the value is scale free.
double normalized_volume(const Eigen::MatrixXd& vertices);

/// Successive projection on centered points lifted with a constant 1.
VertexSet sp(const Eigen::MatrixXd& points, Index k);

/// Exhaustive search over k-subsets minimising the largest distance from the
/// remaining candidates to the subset's hull. Ties: larger normalized volume,
/// then the lexicographically first index set.
VertexSet combinatorial_select(const Eigen::MatrixXd& candidates, Index k);

/// Keeps points with at least m others within 0.05 of the cloud diameter and
/// replaces each by the mean of its N nearest points (itself included).
Eigen::MatrixXd knn_denoise(const Eigen::MatrixXd& points, Index m, Index n_avg);

Index default_local_centers(Index n, Index k);

VertexSet vertex_hunt(const Eigen::MatrixXd& points, Index k, VhMethod method, const VhParams& params = {},
                      std::uint64_t seed = 0);

/// max_k ||v_hat_k - v_k|| under the best matching of rows.
double vertex_error(const Eigen::MatrixXd& estimate, const Eigen::MatrixXd& truth);

}  // namespace scorenet
