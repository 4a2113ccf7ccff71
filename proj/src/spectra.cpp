#include "scorenet/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "scorenet/error.hpp"
#include "scorenet/rng.hpp"

namespace scorenet {

namespace {

constexpr double kNearZero = 1e-12;

void check_symmetric(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw InvalidArgument("eigs_sym: matrix must be square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw InvalidArgument("eigs_sym: matrix is not symmetric");
  }
}

/// Indices of `values` ranked by |value + shift| descending. Magnitudes are
/// compared on a 1e-12 relative grid so that ties are decided by signed
/// value, then by index, independently of rounding noise.
std::vector<Index> magnitude_order(const Eigen::VectorXd& values, double shift) {
  const Index count = values.size();
  const double scale = count == 0 ? 0.0 : (values.array() + shift).abs().maxCoeff();
  std::vector<long long> key(static_cast<std::size_t>(count), 0);
  if (scale > 0.0) {
    for (Index i = 0; i < count; ++i) {
      key[i] = std::llround(std::abs(values(i) + shift) / scale * 1e12);
    }
  }
  std::vector<Index> order(static_cast<std::size_t>(count));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    if (key[a] != key[b]) return key[a] > key[b];
    if (values(a) != values(b)) return values(a) > values(b);
    return a < b;
  });
  return order;
}

void fix_signs(Eigen::MatrixXd& vectors) {
  for (Index c = 0; c < vectors.cols(); ++c) {
    const double sum = vectors.col(c).sum();
    if (std::abs(sum) > 1e-10) {
      if (sum < 0.0) vectors.col(c) *= -1.0;
    } else {
      // Sum is numerically zero: orient by the largest-magnitude entry.
      Index at = 0;
      vectors.col(c).cwiseAbs().maxCoeff(&at);
      if (vectors(at, c) < 0.0) vectors.col(c) *= -1.0;
    }
  }
  if (vectors.cols() > 0) {
    Index at = 0;
    vectors.col(0).cwiseAbs().maxCoeff(&at);
    if (vectors(at, 0) < 0.0) vectors.col(0) *= -1.0;
  }
}

EigenPairs select(const Eigen::VectorXd& values, const Eigen::MatrixXd& vectors, Index k, double shift) {
  const auto order = magnitude_order(values, shift);
  EigenPairs out;
  out.values.resize(k);
  out.vectors.resize(vectors.rows(), k);
  for (Index i = 0; i < k; ++i) {
    out.values(i) = values(order[i]);
    out.vectors.col(i) = vectors.col(order[i]);
  }
  fix_signs(out.vectors);
  return out;
}

EigenPairs dense_eigs(const Eigen::MatrixXd& m, Index k, double shift) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success) throw NumericalError("eigs_sym: eigensolver did not converge");
  return select(solver.eigenvalues(), solver.eigenvectors(), k, shift);
}

/// Lanczos with full reorthogonalisation. The Krylov basis grows until the
/// `want` leading Ritz pairs (by |theta + shift|) have residual below
/// 1e-11 * ||m||, or until the basis spans the whole space.
EigenPairs lanczos_eigs(const Eigen::MatrixXd& m, Index k, double shift) {
  const Index n = m.rows();
  const Index want = std::min(n, k + 1);
  Rng rng(0x5c0e5eedULL);

  Eigen::MatrixXd basis(n, std::min<Index>(n, 2 * want + 40));
  std::vector<double> alpha;
  std::vector<double> beta;
  Eigen::VectorXd q(n);
  for (Index i = 0; i < n; ++i) q(i) = rng.normal();
  q.normalize();
  basis.col(0) = q;

  const double norm_estimate = std::max(1e-300, m.cwiseAbs().rowwise().sum().maxCoeff());
  Eigen::VectorXd w(n);
  for (Index j = 0;; ++j) {
    w.noalias() = m * basis.col(j);
    alpha.push_back(basis.col(j).dot(w));
    // Two passes of classical Gram-Schmidt against the whole basis.
    for (int pass = 0; pass < 2; ++pass) {
      const Eigen::VectorXd coeff = basis.leftCols(j + 1).transpose() * w;
      w.noalias() -= basis.leftCols(j + 1) * coeff;
    }
    double b = w.norm();
    const Index dim = j + 1;

    const bool exhausted = dim == n;
    const bool check = exhausted || (dim >= want && (dim - want) % 5 == 0) || b < 1e-12 * norm_estimate;
    if (check && dim >= want) {
      Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), dim);
      Eigen::VectorXd sub = dim > 1 ? Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(beta.data(), dim - 1))
                                    : Eigen::VectorXd();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
      tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
      if (tri.info() != Eigen::Success) throw NumericalError("eigs_sym: tridiagonal solve failed");
      const auto order = magnitude_order(tri.eigenvalues(), shift);
      bool converged = true;
      if (!exhausted) {
        for (Index i = 0; i < want; ++i) {
          const double residual = std::abs(b * tri.eigenvectors()(dim - 1, order[i]));
          if (residual > 1e-11 * norm_estimate) {
            converged = false;
            break;
          }
        }
      }
      if (converged) {
        const Eigen::MatrixXd ritz = basis.leftCols(dim) * tri.eigenvectors();
        return select(tri.eigenvalues(), ritz, k, shift);
      }
    }

    if (b < 1e-12 * norm_estimate) {
      // Invariant subspace found: continue from a fresh direction orthogonal
      // to the current basis; the tridiagonal matrix becomes block diagonal.
      for (Index i = 0; i < n; ++i) w(i) = rng.normal();
      for (int pass = 0; pass < 2; ++pass) {
        const Eigen::VectorXd coeff = basis.leftCols(dim).transpose() * w;
        w.noalias() -= basis.leftCols(dim) * coeff;
      }
      w.normalize();
      b = 0.0;
    } else {
      w /= b;
    }
    beta.push_back(b);
    if (basis.cols() == dim) basis.conservativeResize(Eigen::NoChange, std::min(n, 2 * dim));
    basis.col(dim) = w;
  }
}

}  // namespace

EigenPairs eigs_sym(const Eigen::MatrixXd& m, Index k, double shift, EigenSolver solver) {
  check_symmetric(m);
  const Index n = m.rows();
  if (k < 1 || k > n) throw InvalidArgument("eigs_sym: k must lie in [1, n]");
  if (solver == EigenSolver::automatic) {
    solver = n > kLanczosCutoff ? EigenSolver::lanczos : EigenSolver::dense;
  }
  return solver == EigenSolver::dense ? dense_eigs(m, k, shift) : lanczos_eigs(m, k, shift);
}

void align_signs(EigenPairs& eig, const EigenPairs& reference) {
  if (eig.n() != reference.n()) throw InvalidArgument("align_signs: dimension mismatch");
  const Index k = std::min(eig.k(), reference.k());
  for (Index c = 0; c < k; ++c) {
    if (eig.vectors.col(c).dot(reference.vectors.col(c)) < 0.0) eig.vectors.col(c) *= -1.0;
  }
}

SingularTriplets svd_top(const Eigen::MatrixXd& m, Index k) {
  if (k < 1 || k > std::min(m.rows(), m.cols())) throw InvalidArgument("svd_top: k must lie in [1, min(p, n)]");
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SingularTriplets out;
  out.values = svd.singularValues().head(k);
  out.left = svd.matrixU().leftCols(k);
  out.right = svd.matrixV().leftCols(k);
  for (Index c = 0; c < k; ++c) {
    Index at = 0;
    out.left.col(c).cwiseAbs().maxCoeff(&at);
    if (out.left(at, c) < 0.0) {
      out.left.col(c) *= -1.0;
      out.right.col(c) *= -1.0;
    }
  }
  return out;
}

Eigen::MatrixXd pre_pca_normalize(const Graph& g, PrePca mode, double delta) {
  if (delta < 0.0) throw InvalidArgument("pre_pca_normalize: delta must be nonnegative");
  const Eigen::MatrixXd a = g.adjacency();
  if (mode == PrePca::none) return a;
  const Eigen::VectorXd d = g.degrees();
  double ridge = delta;
  if (mode == PrePca::laplacian_mean) ridge = delta * d.mean();
  if (mode == PrePca::laplacian_max) ridge = delta * d.maxCoeff();
  Eigen::VectorXd scale(g.n());
  for (Index i = 0; i < g.n(); ++i) {
    const double denom = d(i) + ridge;
    if (denom <= 0.0) {
      throw InvalidArgument("pre_pca_normalize: node " + std::to_string(i) +
                            " is isolated; use a positive ridge or restrict to the giant component");
    }
    scale(i) = mode == PrePca::glm ? 1.0 / denom : 1.0 / std::sqrt(denom);
  }
  return scale.asDiagonal() * a * scale.asDiagonal();
}

double default_threshold(Index n) {
  const double t = std::log(static_cast<double>(n));
  return n <= 200 ? 2.0 * t : t;
}

Eigen::MatrixXd column_ratios(const Eigen::MatrixXd& vectors, double threshold) {
  const Index n = vectors.rows();
  const Index cols = vectors.cols() - 1;
  Eigen::MatrixXd out(n, std::max<Index>(cols, 0));
  for (Index i = 0; i < n; ++i) {
    const double den = vectors(i, 0);
    for (Index c = 0; c < cols; ++c) {
      const double num = vectors(i, c + 1);
      double value = 0.0;
      if (std::abs(den) < kNearZero) {
        if (std::isinf(threshold)) {
          throw NumericalError("leading vector has a zero entry at row " + std::to_string(i) +
                               "; supply a finite threshold");
        }
        value = std::abs(num) < kNearZero ? 0.0 : std::copysign(threshold, num);
      } else {
        const double r = num / den;
        value = std::copysign(std::min(threshold, std::abs(r)), r);
      }
      out(i, c) = value;
    }
  }
  return out;
}

double quantile_threshold(const Eigen::MatrixXd& vectors, double quantile) {
  if (!(quantile > 0.0 && quantile <= 1.0)) throw InvalidArgument("quantile_threshold: quantile must lie in (0, 1]");
  std::vector<double> norms;
  for (Index i = 0; i < vectors.rows(); ++i) {
    if (std::abs(vectors(i, 0)) < kNearZero) continue;
    norms.push_back((vectors.row(i).tail(vectors.cols() - 1) / vectors(i, 0)).norm());
  }
  if (norms.empty()) throw NumericalError("quantile_threshold: leading vector vanishes");
  std::sort(norms.begin(), norms.end());
  const auto at = static_cast<std::size_t>(std::ceil(quantile * static_cast<double>(norms.size()))) - 1;
  return std::max(norms[std::min(at, norms.size() - 1)], kNearZero);
}

RatioMatrix ratio_normalize(const EigenPairs& eig, std::optional<double> threshold) {
  if (eig.k() < 2) throw InvalidArgument("ratio_normalize: need at least two eigenvectors");
  RatioMatrix out;
  out.threshold = threshold.value_or(default_threshold(eig.n()));
  if (!(out.threshold > 0.0)) throw InvalidArgument("ratio_normalize: threshold must be positive");
  out.ratios = column_ratios(eig.vectors, out.threshold);
  return out;
}

Eigen::MatrixXd scoreq_normalize(const EigenPairs& eig, double q) {
  if (!(q > 0.0)) throw InvalidArgument("scoreq_normalize: q must be positive");
  Eigen::MatrixXd out = eig.vectors;
  for (Index i = 0; i < out.rows(); ++i) {
    const double norm = std::pow(out.row(i).cwiseAbs().array().pow(q).sum(), 1.0 / q);
    if (!(norm > 0.0)) throw InvalidArgument("scoreq_normalize: row " + std::to_string(i) + " is zero");
    out.row(i) /= norm;
  }
  return out;
}

}  // namespace scorenet
