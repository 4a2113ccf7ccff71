#pragma once

#include <Eigen/Dense>
#include <optional>

#include "scorenet/graph.hpp"

namespace scorenet {

/// Leading eigenpairs of a symmetric matrix.
///
/// `values` are sorted by descending magnitude (of value + shift when a shift
/// was requested); ties on magnitude go to the larger signed value, then the
/// lower solver index. Columns of `vectors` are orthonormal. Sign convention:
/// a column with negative sum is negated, and the first column is then
/// flipped so that its largest-magnitude entry is positive. For the adjacency
/// of a connected graph the first column is then strictly positive.
struct EigenPairs {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;

  Index k() const { return values.size(); }
  Index n() const { return vectors.rows(); }
};

enum class EigenSolver {
  automatic,  ///< dense below kLanczosCutoff rows, Lanczos above
  dense,      ///< full tridiagonal QR decomposition
  lanczos,    ///< Lanczos with full reorthogonalisation
};

inline constexpr Index kLanczosCutoff = 400;

/// Top-k eigenpairs ranked by |lambda + shift|. Reported values are the
/// eigenvalues of `m` itself (not shifted). Throws InvalidArgument when `m`
/// is not symmetric to 1e-10 or k is outside [1, n].
EigenPairs eigs_sym(const Eigen::MatrixXd& m, Index k, double shift = 0.0,
                    EigenSolver solver = EigenSolver::automatic);

/// Flip columns of `eig` whose inner product with the matching column of
/// `reference` is negative.
void align_signs(EigenPairs& eig, const EigenPairs& reference);

struct SingularTriplets {
  Eigen::VectorXd values;  ///< nonincreasing
  Eigen::MatrixXd left;    ///< p x k
  Eigen::MatrixXd right;   ///< n x k
};

/// Top-k singular triplets. Each left vector has its largest-magnitude entry
/// positive; right vectors follow their left partners.
SingularTriplets svd_top(const Eigen::MatrixXd& m, Index k);

enum class PrePca {
  none,
  laplacian_mean,  ///< (D + delta * mean(d) I)^{-1/2} A (...)^{-1/2}
  laplacian_max,   ///< (D + delta * max(d) I)^{-1/2} A (...)^{-1/2}
  glm,             ///< (D + delta I)^{-1} A (D + delta I)^{-1}
};

/// Throws InvalidArgument naming the first isolated node when the ridge is
/// zero and some degree is zero.
Eigen::MatrixXd pre_pca_normalize(const Graph& g, PrePca mode, double delta);

/// Entrywise ratios of eigenvector k+1 to eigenvector 1, clipped to [-T, T].
struct RatioMatrix {
  Eigen::MatrixXd ratios;  ///< n x (K-1)
  double threshold = 0.0;
};

/// log(n), doubled for n <= 200.
double default_threshold(Index n);

/// Threshold from the upper `quantile` (e.g. 0.99) of the unclipped row norms.
double quantile_threshold(const Eigen::MatrixXd& vectors, double quantile);

/// Thresholded ratio matrix. A leading entry below 1e-12 in magnitude yields
/// sgn(numerator) * T, or 0 when the numerator is also below 1e-12.
RatioMatrix ratio_normalize(const EigenPairs& eig, std::optional<double> threshold = std::nullopt);

/// Same rule applied to an arbitrary column block: ratios of columns 1.. of
/// `vectors` to column 0. `threshold` may be +infinity (no clipping).
Eigen::MatrixXd column_ratios(const Eigen::MatrixXd& vectors, double threshold);

/// Row i divided by its l^q norm. Throws InvalidArgument on a zero row.
Eigen::MatrixXd scoreq_normalize(const EigenPairs& eig, double q);

}  // namespace scorenet
