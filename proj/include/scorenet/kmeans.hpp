#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "scorenet/graph.hpp"

namespace scorenet {

struct ClusterResult {
  std::vector<int> labels;           ///< in [0, K), numbered by first appearance
  Eigen::MatrixXd centers;           ///< K x d
  double inertia = 0.0;              ///< sum of squared distances to assigned centers
  std::vector<double> inertia_trace; ///< per Lloyd iteration of the winning restart
};

struct KMeansOptions {
  int restarts = 10;
  int max_iterations = 100;
  double tolerance = 1e-8;  ///< relative inertia decrease that stops Lloyd
};

/// Lloyd's algorithm from k-means++ seeds; the best restart by inertia wins
/// (earliest restart on ties). An empty cluster takes the point farthest from
/// its center within the largest cluster. Throws InvalidArgument if k > n.
ClusterResult kmeans(const Eigen::MatrixXd& points, Index k, std::uint64_t seed,
                     const KMeansOptions& options = {});

/// Sum of squared distances of every point to the center of its label.
double assignment_cost(const Eigen::MatrixXd& points, const std::vector<int>& labels,
                       const Eigen::MatrixXd& centers);

}  // namespace scorenet
