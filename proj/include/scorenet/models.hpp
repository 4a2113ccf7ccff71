#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "scorenet/graph.hpp"

namespace scorenet {

/// Degree-corrected mixed-membership parameters: Omega = Theta Pi P Pi' Theta.
struct DcmmParams {
  Eigen::VectorXd theta;     ///< n positive degree parameters
  Eigen::MatrixXd pi;        ///< n x K, rows are membership PMFs
  Eigen::MatrixXd p_matrix;  ///< K x K symmetric, nonnegative

  Index n() const { return theta.size(); }
  Index k() const { return p_matrix.rows(); }

  /// Checks dimensions, theta > 0, PMF rows, symmetric nonnegative P. With
  /// `identifiable`, also unit diagonal of P and at least one pure row per
  /// community (pure = within 1e-12 of a basis vector). Throws InvalidArgument.
  void validate(bool identifiable = false) const;

  /// Indices of rows equal (to 1e-12) to e_k, for each community k.
  std::vector<std::vector<Index>> pure_nodes() const;
};

struct ExpectedAdjacency {
  Eigen::MatrixXd omega;
  bool exceeds_one = false;  ///< some entry > 1: not a valid probability model
};

/// Omega(i,j) = theta_i theta_j pi_i' P pi_j, diagonal included.
ExpectedAdjacency expected_adjacency(const DcmmParams& params);

/// Undirected Bernoulli draw of the upper triangle of `omega`.
/// Throws InvalidArgument if any off-diagonal entry leaves [0, 1].
Graph sample_adjacency(const Eigen::MatrixXd& omega, std::uint64_t seed);

/// Directed draw: every ordered pair i != j independently.
Graph sample_directed(const Eigen::MatrixXd& omega, std::uint64_t seed);

Graph sample_dcmm(const DcmmParams& params, std::uint64_t seed);

/// Hard labels implied by Pi (argmax of each row, lowest index on ties).
std::vector<int> dominant_labels(const Eigen::MatrixXd& pi);

/// Word frequencies: column i holds counts of document i divided by its length.
struct Corpus {
  Eigen::MatrixXd d_matrix;      ///< p x n
  std::vector<long> lengths;     ///< N_i
  std::vector<std::string> vocab;

  Index p() const { return d_matrix.rows(); }
  Index n() const { return d_matrix.cols(); }
};

/// pLSI parameters: Omega = A W with PMF columns in both factors.
struct PlsiParams {
  Eigen::MatrixXd a_matrix;  ///< p x K
  Eigen::MatrixXd w_matrix;  ///< K x n

  void validate() const;
};

/// Column i of N_i * D is a Multinomial(N_i, A w_i) draw.
Corpus sample_plsi(const PlsiParams& params, const std::vector<long>& lengths, std::uint64_t seed);

/// Noiseless corpus D = A W (lengths reported as 0).
Corpus expected_corpus(const PlsiParams& params);

// ---------------------------------------------------------------------------
// Simulation settings used by tests, the acceptance suite and the CLI.

/// Balanced DCBM: labels i mod K (so community sizes differ by at most one),
/// P with unit diagonal and `off_diagonal` elsewhere.
DcmmParams balanced_dcbm(const Eigen::VectorXd& theta, Index k, double off_diagonal);

/// Two-community heterogeneous setting: P = [[a, b], [b, c]], first half of
/// the nodes in community 0, 1/theta_i iid Uniform[1, 20].
DcmmParams heterogeneous_two_block(Index n, double a, double b, double c, std::uint64_t seed);

/// Vertex-hunting benchmark: n nodes, K = 3, P diagonal 1 off-diagonal 0.1,
/// `pure_per_community` pure rows each, the rest split evenly between
/// Dirichlet(0.6, 0.2, 0.2) and Dirichlet(0.3, 0.4, 0.3), theta == beta.
DcmmParams vertex_hunting_setting(Index n, Index pure_per_community, double beta, std::uint64_t seed);

/// Generic DCMM: pure_per_community pure rows per community, remaining rows
/// Dirichlet(alpha 1_K); theta iid Uniform[theta_lo, theta_hi].
DcmmParams random_dcmm(Index n, Index k, Index pure_per_community, double off_diagonal,
                       double theta_lo, double theta_hi, double alpha, std::uint64_t seed);

/// Anchor-word topic model: `anchors` anchor words per topic at the top of the
/// vocabulary, remaining words loaded on every topic at random; W has one pure
/// document per topic followed by Dirichlet(alpha 1_K) columns.
PlsiParams anchor_topic_model(Index p, Index n, Index k, Index anchors, double alpha,
                              std::uint64_t seed);

}  // namespace scorenet
