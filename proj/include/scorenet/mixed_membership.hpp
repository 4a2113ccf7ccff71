#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "scorenet/graph.hpp"
#include "scorenet/spectra.hpp"
#include "scorenet/vertex_hunt.hpp"

namespace scorenet {

struct MembershipEstimate {
  Eigen::MatrixXd pi_hat;   ///< n x K, rows are PMFs
  VertexSet vertices;
  Eigen::VectorXd b1_hat;   ///< K positive reals, aligned with vertex rows
  Eigen::MatrixXd ratios;   ///< the point cloud given to vertex hunting
  Index fallback_rows = 0;  ///< rows clipped to zero and reset to uniform
};

/// b1(k) = (lambda_1 + sum_j lambda_{j+1} v_k(j)^2)^(-1/2) for each vertex row.
/// Throws NumericalError on a nonpositive radicand.
Eigen::VectorXd b1_from_spectra(const Eigen::VectorXd& lambdas, const Eigen::MatrixXd& vertices);

/// Solves r = sum_k w(k) v_k, sum_k w(k) = 1 for many points against one
/// vertex set.
class BarycentricSolver {
 public:
  /// Throws NumericalError when the vertices are affinely dependent.
  explicit BarycentricSolver(const Eigen::MatrixXd& vertices);
  Eigen::VectorXd weights(const Eigen::VectorXd& point) const;

 private:
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  Index k_;
};

Eigen::VectorXd barycentric_weights(const Eigen::VectorXd& point, const Eigen::MatrixXd& vertices);

struct MixedScoreOptions {
  VhMethod vh_method = VhMethod::svs_plus;
  VhParams vh_params;
  std::optional<double> threshold;  ///< T; log n rule when empty
  EigenSolver solver = EigenSolver::automatic;
};

/// Mixed-SCORE on a connected undirected graph, k >= 2.
MembershipEstimate mixed_score(const Graph& g, Index k, const MixedScoreOptions& options = {},
                               std::uint64_t seed = 0);

/// Ratios, vertex hunting and membership reconstruction from given eigenpairs.
MembershipEstimate mixed_score_from_eigenpairs(const EigenPairs& eig, Index k, double threshold,
                                               const MixedScoreOptions& options, std::uint64_t seed);

/// Mixed-SCORE on the exact expected adjacency. Ratios are unclipped unless
/// options.threshold is set.
MembershipEstimate mixed_score_oracle(const Eigen::MatrixXd& omega, Index k, const MixedScoreOptions& options = {},
                                      std::uint64_t seed = 0);

/// Clip w / b1 at zero and renormalize; counts rows that had to fall back.
Eigen::MatrixXd memberships_from_weights(const Eigen::MatrixXd& ratios, const VertexSet& vertices,
                                         const Eigen::VectorXd& b1, Index& fallback_rows);

/// r_t(i, k) = lambda_1 (A_t xi_{k+1})_i / (lambda_{k+1} (A_t xi_1)_i), clipped
/// to [-T, T]. Eigenpairs come from the reference snapshot.
Eigen::MatrixXd dynamic_ratios(const Eigen::MatrixXd& a_t, const EigenPairs& ref, double threshold);

struct DynamicOptions {
  MixedScoreOptions base;
  bool pool = false;  ///< one vertex hunt on the stacked clouds of all snapshots
};

struct DynamicResult {
  EigenPairs reference;
  std::vector<MembershipEstimate> snapshots;
  double threshold = 0.0;
};

DynamicResult dynamic_mixed_score(const std::vector<Graph>& snapshots, Index k, const DynamicOptions& options = {},
                                  std::uint64_t seed = 0);

/// Row (node, t): distances from r_i^(t) to each vertex of the first snapshot.
struct TrajectoryRow {
  Index node;
  Index t;
  std::vector<double> distances;
};

std::vector<TrajectoryRow> trajectories(const DynamicResult& result);

/// max_i ||pi_hat_i - pi_i||_1 minimised over column permutations.
double max_row_l1_error(const Eigen::MatrixXd& pi_hat, const Eigen::MatrixXd& pi);

/// (1/n) sum_i ||pi_hat_i - pi_i||^2 minimised over column permutations.
double membership_mse(const Eigen::MatrixXd& pi_hat, const Eigen::MatrixXd& pi);

}  // namespace scorenet
