#pragma once

#include <Eigen/Dense>
#include <vector>

#include "scorenet/graph.hpp"

namespace scorenet {

/// Assignment row -> column minimising the summed cost of a square matrix.
/// Exhaustive over permutations up to 10 rows, Hungarian algorithm beyond.
std::vector<Index> min_cost_assignment(const Eigen::MatrixXd& cost);

/// Assignment minimising the largest selected cost (exhaustive; K <= 10).
std::vector<Index> bottleneck_assignment(const Eigen::MatrixXd& cost);

}  // namespace scorenet
