#include "scorenet/kmeans.hpp"

#include <algorithm>
#include <limits>

#include "scorenet/error.hpp"
#include "scorenet/rng.hpp"

namespace scorenet {

namespace {

struct Run {
  std::vector<int> labels;
  Eigen::MatrixXd centers;
  double inertia = 0.0;
  std::vector<double> trace;
};

Eigen::MatrixXd plus_plus_seeds(const Eigen::MatrixXd& points, Index k, Rng& rng) {
  const Index n = points.rows();
  Eigen::MatrixXd centers(k, points.cols());
  centers.row(0) = points.row(static_cast<Index>(rng.below(static_cast<std::uint64_t>(n))));
  Eigen::VectorXd dist2 = (points.rowwise() - centers.row(0)).rowwise().squaredNorm();
  std::vector<double> cumulative(static_cast<std::size_t>(n));
  for (Index c = 1; c < k; ++c) {
    double running = 0.0;
    for (Index i = 0; i < n; ++i) {
      running += dist2(i);
      cumulative[i] = running;
    }
    Index pick = 0;
    if (running > 0.0) {
      pick = static_cast<Index>(rng.categorical(cumulative));
    } else {
      // All remaining points coincide with a center; take any.
      pick = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
    }
    centers.row(c) = points.row(pick);
    dist2 = dist2.cwiseMin((points.rowwise() - centers.row(c)).rowwise().squaredNorm());
  }
  return centers;
}

double assign(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centers, std::vector<int>& labels) {
  double total = 0.0;
  for (Index i = 0; i < points.rows(); ++i) {
    Index best = 0;
    const double d = (centers.rowwise() - points.row(i)).rowwise().squaredNorm().minCoeff(&best);
    labels[i] = static_cast<int>(best);
    total += d;
  }
  return total;
}

void update_centers(const Eigen::MatrixXd& points, std::vector<int>& labels, Eigen::MatrixXd& centers) {
  const Index k = centers.rows();
  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, points.cols());
  std::vector<Index> sizes(static_cast<std::size_t>(k), 0);
  for (Index i = 0; i < points.rows(); ++i) {
    sums.row(labels[i]) += points.row(i);
    ++sizes[labels[i]];
  }
  for (Index c = 0; c < k; ++c) {
    if (sizes[c] > 0) centers.row(c) = sums.row(c) / static_cast<double>(sizes[c]);
  }
  // Repair empty clusters with the worst-fitting point of the largest cluster.
  for (Index c = 0; c < k; ++c) {
    if (sizes[c] > 0) continue;
    const auto largest = static_cast<Index>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
    Index far = -1;
    double far_d = -1.0;
    for (Index i = 0; i < points.rows(); ++i) {
      if (labels[i] != largest) continue;
      const double d = (points.row(i) - centers.row(largest)).squaredNorm();
      if (d > far_d) {
        far_d = d;
        far = i;
      }
    }
    labels[far] = static_cast<int>(c);
    --sizes[largest];
    sizes[c] = 1;
    centers.row(c) = points.row(far);
    sums.row(largest) -= points.row(far);
    centers.row(largest) = sums.row(largest) / static_cast<double>(sizes[largest]);
  }
}

Run lloyd(const Eigen::MatrixXd& points, Index k, Rng& rng, const KMeansOptions& options) {
  Run run;
  run.centers = plus_plus_seeds(points, k, rng);
  run.labels.assign(static_cast<std::size_t>(points.rows()), 0);
  assign(points, run.centers, run.labels);
  double previous = std::numeric_limits<double>::infinity();
  for (int it = 0; it < options.max_iterations; ++it) {
    update_centers(points, run.labels, run.centers);
    const double after_update = assignment_cost(points, run.labels, run.centers);
    const std::vector<int> before = run.labels;
    const double cost = assign(points, run.centers, run.labels);
    run.trace.push_back(std::min(cost, after_update));
    if (before == run.labels || previous - cost <= options.tolerance * std::max(previous, 1e-300)) break;
    previous = cost;
  }
  // Centers become the means of the final labels (and empty clusters are repaired).
  update_centers(points, run.labels, run.centers);
  run.inertia = assignment_cost(points, run.labels, run.centers);
  return run;
}

void canonicalize(Run& run) {
  const Index k = run.centers.rows();
  std::vector<int> remap(static_cast<std::size_t>(k), -1);
  int next = 0;
  for (int& label : run.labels) {
    if (remap[label] < 0) remap[label] = next++;
    label = remap[label];
  }
  Eigen::MatrixXd centers(k, run.centers.cols());
  for (Index c = 0; c < k; ++c) centers.row(remap[c] >= 0 ? remap[c] : c) = run.centers.row(c);
  run.centers = centers;
}

}  // namespace

double assignment_cost(const Eigen::MatrixXd& points, const std::vector<int>& labels,
                       const Eigen::MatrixXd& centers) {
  double total = 0.0;
  for (Index i = 0; i < points.rows(); ++i) total += (points.row(i) - centers.row(labels[i])).squaredNorm();
  return total;
}

ClusterResult kmeans(const Eigen::MatrixXd& points, Index k, std::uint64_t seed, const KMeansOptions& options) {
  const Index n = points.rows();
  if (k < 1) throw InvalidArgument("kmeans: k must be positive");
  if (k > n) throw InvalidArgument("kmeans: k = " + std::to_string(k) + " exceeds n = " + std::to_string(n));
  if (options.restarts < 1) throw InvalidArgument("kmeans: need at least one restart");
  Rng rng(seed);
  Run best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int r = 0; r < options.restarts; ++r) {
    Run run = lloyd(points, k, rng, options);
    if (run.inertia < best.inertia) best = std::move(run);
  }
  canonicalize(best);
  ClusterResult out;
  out.labels = std::move(best.labels);
  out.centers = std::move(best.centers);
  out.inertia = best.inertia;
  out.inertia_trace = std::move(best.trace);
  return out;
}

}  // namespace scorenet
