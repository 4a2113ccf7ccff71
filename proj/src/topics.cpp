#include "scorenet/topics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "scorenet/error.hpp"
#include "scorenet/mixed_membership.hpp"
#include "scorenet/spectra.hpp"

namespace scorenet {

namespace {

void normalize_columns(Eigen::MatrixXd& m) {
  for (Index c = 0; c < m.cols(); ++c) {
    const double total = m.col(c).sum();
    if (total > 0.0) {
      m.col(c) /= total;
    } else {
      m.col(c).setConstant(1.0 / static_cast<double>(m.rows()));
    }
  }
}

}  // namespace

TopicEstimate topic_score(const Corpus& corpus, Index k, const TopicOptions& options, std::uint64_t seed) {
  const Eigen::MatrixXd& d = corpus.d_matrix;
  const Index p = d.rows();
  const Index n = d.cols();
  if (k < 1) throw InvalidArgument("topic_score: k must be positive");
  if ((d.array() < 0.0).any() || !d.allFinite()) throw InvalidArgument("topic_score: frequencies must be finite and nonnegative");

  TopicEstimate out;
  const Eigen::VectorXd freq = d.rowwise().sum();
  std::vector<Index> kept;
  for (Index j = 0; j < p; ++j) {
    if (freq(j) > 0.0) {
      kept.push_back(j);
    } else {
      out.dropped_words.push_back(j);
    }
  }
  const Index pk = static_cast<Index>(kept.size());
  if (pk < k) throw InvalidArgument("topic_score: fewer words with positive frequency than topics");
  Eigen::MatrixXd dk(pk, n);
  Eigen::VectorXd mk(pk);
  for (Index r = 0; r < pk; ++r) {
    dk.row(r) = d.row(kept[r]);
    mk(r) = freq(kept[r]);
  }

  out.a_hat = Eigen::MatrixXd::Zero(p, k);
  out.alpha = Eigen::MatrixXd::Zero(p, k);
  if (k == 1) {
    for (Index r = 0; r < pk; ++r) {
      out.a_hat(kept[r], 0) = mk(r) / mk.sum();
      out.alpha(kept[r], 0) = 1.0;
    }
    out.w_hat = Eigen::MatrixXd::Ones(1, n);
    out.vertices.vertices = Eigen::MatrixXd::Zero(1, 0);
    out.vertices.method = options.vh_method;
    return out;
  }

  const Eigen::VectorXd m_sqrt = mk.cwiseSqrt();
  const SingularTriplets svd = svd_top(m_sqrt.cwiseInverse().asDiagonal() * dk, k);
  if (!(svd.values(k - 1) > 1e-12 * svd.values(0))) {
    throw InvalidArgument("topic_score: k = " + std::to_string(k) + " exceeds the numerical rank of the corpus");
  }
  Eigen::MatrixXd xi = svd.left;
  if (xi.col(0).sum() < 0.0) xi.col(0) = -xi.col(0);
  const double t = options.threshold.value_or(std::numeric_limits<double>::infinity());
  const Eigen::MatrixXd ratios = column_ratios(xi, t);

  out.vertices = vertex_hunt(ratios, k, options.vh_method, options.vh_params, seed);
  const BarycentricSolver solver(out.vertices.vertices);
  Eigen::MatrixXd alpha(pk, k);
  for (Index r = 0; r < pk; ++r) {
    Eigen::RowVectorXd w = solver.weights(ratios.row(r).transpose()).transpose().cwiseMax(0.0);
    const double total = w.sum();
    alpha.row(r) = total > 0.0 ? Eigen::RowVectorXd(w / total)
                               : Eigen::RowVectorXd::Constant(k, 1.0 / static_cast<double>(k));
  }
  Eigen::MatrixXd g = (m_sqrt.cwiseProduct(xi.col(0))).asDiagonal() * alpha;
  normalize_columns(g);

  const Eigen::VectorXd m_inv = mk.cwiseInverse();
  const Eigen::MatrixXd gram = g.transpose() * m_inv.asDiagonal() * g;
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
  if (!lu.isInvertible()) throw NumericalError("topic_score: A' M^-1 A is singular");
  Eigen::MatrixXd w_hat = lu.solve(g.transpose() * m_inv.asDiagonal() * dk).cwiseMax(0.0);
  normalize_columns(w_hat);

  for (Index r = 0; r < pk; ++r) {
    out.a_hat.row(kept[r]) = g.row(r);
    out.alpha.row(kept[r]) = alpha.row(r);
  }
  out.w_hat = std::move(w_hat);
  return out;
}

std::vector<TopicAnchors> anchor_diagnostics(const TopicEstimate& estimate, Index top_m) {
  const Index p = estimate.alpha.rows();
  const Index k = estimate.alpha.cols();
  if (top_m < 0) throw InvalidArgument("anchor_diagnostics: top_m must be nonnegative");
  std::vector<char> dropped(static_cast<std::size_t>(p), 0);
  for (Index j : estimate.dropped_words) dropped[j] = 1;

  std::vector<TopicAnchors> out(static_cast<std::size_t>(k));
  for (Index t = 0; t < k; ++t) {
    std::vector<std::pair<double, Index>> scored;
    for (Index j = 0; j < p; ++j) {
      if (dropped[j]) continue;
      double rival = k == 1 ? 0.0 : -std::numeric_limits<double>::infinity();
      for (Index l = 0; l < k; ++l) {
        if (l != t) rival = std::max(rival, estimate.alpha(j, l));
      }
      scored.emplace_back(estimate.alpha(j, t) - rival, j);
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    TopicAnchors& anchors = out[t];
    anchors.weak = scored.empty() || scored.front().first < 0.5;
    const Index take = std::min<Index>(top_m, static_cast<Index>(scored.size()));
    for (Index r = 0; r < take; ++r) {
      anchors.words.push_back(scored[r].second);
      anchors.scores.push_back(scored[r].first);
    }
  }
  return out;
}

TrScoreResult tr_score(const Eigen::MatrixXd& w_hat, const CitationPairs& citations) {
  const Index k = w_hat.rows();
  const Index n = w_hat.cols();
  if (k < 2) throw InvalidArgument("tr_score: need at least two topics");
  if (citations.pairs.empty()) throw InvalidArgument("tr_score: no citation pairs");

  Eigen::MatrixXd x(k, static_cast<Index>(citations.pairs.size()));
  Eigen::VectorXd counts(x.cols());
  for (std::size_t r = 0; r < citations.pairs.size(); ++r) {
    const auto& pair = citations.pairs[r];
    if (pair.citing < 0 || pair.citing >= n || pair.cited < 0 || pair.cited >= n) {
      throw InvalidArgument("tr_score: citation " + std::to_string(r + 1) + " refers to a document outside the corpus");
    }
    if (pair.citing == pair.cited) throw InvalidArgument("tr_score: self-citation at pair " + std::to_string(r + 1));
    if (!(pair.count > 0.0)) throw InvalidArgument("tr_score: citation counts must be positive");
    x.col(static_cast<Index>(r)) = w_hat.col(pair.citing) - w_hat.col(pair.cited);
    counts(static_cast<Index>(r)) = pair.count;
  }

  // Orthonormal basis of the sum-zero subspace.
  Eigen::MatrixXd basis = Eigen::MatrixXd::Identity(k, k).rowwise() - Eigen::RowVectorXd::Constant(k, 1.0 / k);
  basis = Eigen::HouseholderQR<Eigen::MatrixXd>(basis.leftCols(k - 1)).householderQ() *
          Eigen::MatrixXd::Identity(k, k - 1);
  const Eigen::MatrixXd z = basis.transpose() * x;

  auto loglik = [&](const Eigen::VectorXd& beta) {
    const Eigen::ArrayXd s = (z.transpose() * beta).array();
    // log sigmoid(s) = -log(1 + exp(-s))
    return -(counts.array() * (s.max(0.0) - s + (1.0 + (-s.abs()).exp()).log())).sum();
  };

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(k - 1);
  TrScoreResult out;
  for (int iter = 0; iter < 200; ++iter) {
    const Eigen::ArrayXd s = (z.transpose() * beta).array();
    const Eigen::ArrayXd prob = 1.0 / (1.0 + (-s).exp());
    const Eigen::VectorXd grad = z * (counts.array() * (1.0 - prob)).matrix();
    out.gradient_norm = grad.norm();
    out.iterations = iter;
    if (out.gradient_norm <= 1e-9) break;
    const Eigen::VectorXd curvature = counts.array() * prob * (1.0 - prob);
    const Eigen::MatrixXd hessian = z * curvature.asDiagonal() * z.transpose();
    Eigen::VectorXd step = hessian.completeOrthogonalDecomposition().solve(grad);
    if (!step.allFinite() || step.norm() == 0.0) step = grad;
    const double current = loglik(beta);
    double scale = 1.0;
    const double slack = 1e-12 * (1.0 + std::abs(current));
    while (scale > 1e-12 && loglik(beta + scale * step) < current - slack) scale *= 0.5;
    beta += scale * step;
    if (beta.norm() > 50.0 || (z.transpose() * beta).minCoeff() > 20.0) {
      const Eigen::VectorXd dir = basis * beta.normalized();
      std::ostringstream msg;
      msg << "tr_score: citations are completely separated along mu direction (";
      for (Index c = 0; c < k; ++c) msg << (c ? ", " : "") << dir(c);
      msg << "); the maximum likelihood estimate does not exist";
      throw NumericalError(msg.str());
    }
  }
  if (out.gradient_norm > 1e-7) throw NumericalError("tr_score: Newton iteration did not converge");
  out.mu = basis * beta;
  out.ranking.resize(static_cast<std::size_t>(k));
  std::iota(out.ranking.begin(), out.ranking.end(), Index{0});
  std::stable_sort(out.ranking.begin(), out.ranking.end(), [&](Index a, Index b) { return out.mu(a) > out.mu(b); });
  return out;
}

double topic_l1_error(const Eigen::MatrixXd& a_hat, const Eigen::MatrixXd& a_true) {
  if (a_hat.rows() != a_true.rows() || a_hat.cols() != a_true.cols()) {
    throw InvalidArgument("topic_l1_error: shape mismatch");
  }
  const Index k = a_true.cols();
  std::vector<Index> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), Index{0});
  double best = std::numeric_limits<double>::infinity();
  do {
    double worst = 0.0;
    for (Index c = 0; c < k; ++c) worst = std::max(worst, (a_hat.col(perm[c]) - a_true.col(c)).lpNorm<1>());
    best = std::min(best, worst);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace scorenet
