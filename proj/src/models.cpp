#include "scorenet/models.hpp"

#include <cmath>

#include "scorenet/error.hpp"
#include "scorenet/rng.hpp"

namespace scorenet {

namespace {

constexpr double kPureTol = 1e-12;

bool is_pmf(const Eigen::Ref<const Eigen::VectorXd>& v, double tol) {
  return (v.array() >= -tol).all() && std::abs(v.sum() - 1.0) <= tol;
}

}  // namespace

void DcmmParams::validate(bool identifiable) const {
  const Index n = theta.size();
  const Index k = p_matrix.rows();
  if (n == 0 || k == 0) throw InvalidArgument("DcmmParams: empty parameters");
  if (p_matrix.cols() != k) throw InvalidArgument("DcmmParams: P must be square");
  if (pi.rows() != n || pi.cols() != k) throw InvalidArgument("DcmmParams: Pi must be n x K");
  if (!(theta.array() > 0.0).all()) throw InvalidArgument("DcmmParams: theta must be positive");
  if ((p_matrix.array() < 0.0).any()) throw InvalidArgument("DcmmParams: P must be nonnegative");
  if ((p_matrix - p_matrix.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw InvalidArgument("DcmmParams: P must be symmetric");
  }
  for (Index i = 0; i < n; ++i) {
    if (!is_pmf(pi.row(i).transpose(), 1e-10)) {
      throw InvalidArgument("DcmmParams: row " + std::to_string(i) + " of Pi is not a PMF");
    }
  }
  if (identifiable) {
    if ((p_matrix.diagonal().array() - 1.0).abs().maxCoeff() > 1e-12) {
      throw InvalidArgument("DcmmParams: P must have unit diagonal");
    }
    const auto pure = pure_nodes();
    for (Index c = 0; c < k; ++c) {
      if (pure[c].empty()) {
        throw InvalidArgument("DcmmParams: community " + std::to_string(c) + " has no pure node");
      }
    }
  }
}

std::vector<std::vector<Index>> DcmmParams::pure_nodes() const {
  std::vector<std::vector<Index>> pure(static_cast<std::size_t>(pi.cols()));
  for (Index i = 0; i < pi.rows(); ++i) {
    for (Index c = 0; c < pi.cols(); ++c) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(pi.cols());
      e(c) = 1.0;
      if ((pi.row(i).transpose() - e).cwiseAbs().maxCoeff() <= kPureTol) pure[c].push_back(i);
    }
  }
  return pure;
}

ExpectedAdjacency expected_adjacency(const DcmmParams& params) {
  params.validate();
  const Eigen::MatrixXd weighted = params.theta.asDiagonal() * params.pi;
  ExpectedAdjacency out;
  const Eigen::MatrixXd product = weighted * params.p_matrix * weighted.transpose();
  out.omega = 0.5 * (product + product.transpose());
  out.exceeds_one = out.omega.maxCoeff() > 1.0;
  return out;
}

Graph sample_adjacency(const Eigen::MatrixXd& omega, std::uint64_t seed) {
  const Index n = omega.rows();
  if (omega.cols() != n) throw InvalidArgument("sample_adjacency: Omega must be square");
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < j; ++i) {
      const double p = omega(i, j);
      if (!(p >= 0.0 && p <= 1.0)) {
        throw InvalidArgument("sample_adjacency: Omega(" + std::to_string(i) + "," +
                              std::to_string(j) + ") = " + std::to_string(p) +
                              " is not a probability");
      }
    }
  }
  Rng rng(seed);
  std::vector<Edge> edges;
  // Row-major over the upper triangle fixes the draw order.
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if (rng.bernoulli(omega(i, j))) edges.push_back({i, j});
    }
  }
  return Graph(n, std::move(edges), false);
}

Graph sample_directed(const Eigen::MatrixXd& omega, std::uint64_t seed) {
  const Index n = omega.rows();
  if (omega.cols() != n) throw InvalidArgument("sample_directed: Omega must be square");
  Rng rng(seed);
  std::vector<Edge> edges;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double p = omega(i, j);
      if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("sample_directed: entry is not a probability");
      if (rng.bernoulli(p)) edges.push_back({i, j});
    }
  }
  return Graph(n, std::move(edges), true);
}

Graph sample_dcmm(const DcmmParams& params, std::uint64_t seed) {
  return sample_adjacency(expected_adjacency(params).omega, seed);
}

std::vector<int> dominant_labels(const Eigen::MatrixXd& pi) {
  std::vector<int> labels(static_cast<std::size_t>(pi.rows()));
  for (Index i = 0; i < pi.rows(); ++i) {
    Index best = 0;
    pi.row(i).maxCoeff(&best);
    labels[i] = static_cast<int>(best);
  }
  return labels;
}

void PlsiParams::validate() const {
  if (a_matrix.cols() != w_matrix.rows()) throw InvalidArgument("PlsiParams: A and W disagree on K");
  for (Index k = 0; k < a_matrix.cols(); ++k) {
    if (!is_pmf(a_matrix.col(k), 1e-10)) {
      throw InvalidArgument("PlsiParams: column " + std::to_string(k) + " of A is not a PMF");
    }
  }
  for (Index i = 0; i < w_matrix.cols(); ++i) {
    if (!is_pmf(w_matrix.col(i), 1e-10)) {
      throw InvalidArgument("PlsiParams: column " + std::to_string(i) + " of W is not a PMF");
    }
  }
}

namespace {

std::vector<std::string> default_vocab(Index p) {
  std::vector<std::string> vocab;
  vocab.reserve(static_cast<std::size_t>(p));
  for (Index j = 0; j < p; ++j) vocab.push_back("w" + std::to_string(j));
  return vocab;
}

}  // namespace

Corpus sample_plsi(const PlsiParams& params, const std::vector<long>& lengths, std::uint64_t seed) {
  params.validate();
  const Index p = params.a_matrix.rows();
  const Index n = params.w_matrix.cols();
  if (static_cast<Index>(lengths.size()) != n) throw InvalidArgument("sample_plsi: need one length per document");
  Rng rng(seed);
  Corpus corpus;
  corpus.d_matrix = Eigen::MatrixXd::Zero(p, n);
  corpus.lengths = lengths;
  corpus.vocab = default_vocab(p);
  std::vector<double> cumulative(static_cast<std::size_t>(p));
  for (Index i = 0; i < n; ++i) {
    if (lengths[i] < 1) throw InvalidArgument("sample_plsi: document lengths must be >= 1");
    const Eigen::VectorXd probs = params.a_matrix * params.w_matrix.col(i);
    double running = 0.0;
    for (Index j = 0; j < p; ++j) {
      running += std::max(0.0, probs(j));
      cumulative[j] = running;
    }
    std::vector<long> counts(static_cast<std::size_t>(p), 0);
    for (long draw = 0; draw < lengths[i]; ++draw) ++counts[rng.categorical(cumulative)];
    for (Index j = 0; j < p; ++j) {
      corpus.d_matrix(j, i) = static_cast<double>(counts[j]) / static_cast<double>(lengths[i]);
    }
  }
  return corpus;
}

Corpus expected_corpus(const PlsiParams& params) {
  params.validate();
  Corpus corpus;
  corpus.d_matrix = params.a_matrix * params.w_matrix;
  corpus.lengths.assign(static_cast<std::size_t>(corpus.d_matrix.cols()), 0);
  corpus.vocab = default_vocab(corpus.d_matrix.rows());
  return corpus;
}

DcmmParams balanced_dcbm(const Eigen::VectorXd& theta, Index k, double off_diagonal) {
  DcmmParams params;
  params.theta = theta;
  params.pi = Eigen::MatrixXd::Zero(theta.size(), k);
  for (Index i = 0; i < theta.size(); ++i) params.pi(i, i % k) = 1.0;
  params.p_matrix = Eigen::MatrixXd::Constant(k, k, off_diagonal);
  params.p_matrix.diagonal().setOnes();
  return params;
}

DcmmParams heterogeneous_two_block(Index n, double a, double b, double c, std::uint64_t seed) {
  Rng rng(seed);
  DcmmParams params;
  params.theta.resize(n);
  for (Index i = 0; i < n; ++i) params.theta(i) = 1.0 / rng.uniform(1.0, 20.0);
  params.pi = Eigen::MatrixXd::Zero(n, 2);
  for (Index i = 0; i < n; ++i) params.pi(i, i < n / 2 ? 0 : 1) = 1.0;
  params.p_matrix.resize(2, 2);
  params.p_matrix << a, b, b, c;
  return params;
}

DcmmParams vertex_hunting_setting(Index n, Index pure_per_community, double beta, std::uint64_t seed) {
  constexpr Index k = 3;
  if (n < k * pure_per_community) throw InvalidArgument("vertex_hunting_setting: n too small");
  Rng rng(seed);
  DcmmParams params;
  params.theta = Eigen::VectorXd::Constant(n, beta);
  params.pi = Eigen::MatrixXd::Zero(n, k);
  Index row = 0;
  for (Index c = 0; c < k; ++c) {
    for (Index r = 0; r < pure_per_community; ++r) params.pi(row++, c) = 1.0;
  }
  const double alpha1[] = {0.6, 0.2, 0.2};
  const double alpha2[] = {0.3, 0.4, 0.3};
  const Index mixed = n - row;
  for (Index r = 0; r < mixed; ++r, ++row) {
    const auto w = rng.dirichlet(r < (mixed + 1) / 2 ? std::span<const double>(alpha1)
                                                      : std::span<const double>(alpha2));
    for (Index c = 0; c < k; ++c) params.pi(row, c) = w[c];
  }
  params.p_matrix = Eigen::MatrixXd::Constant(k, k, 0.1);
  params.p_matrix.diagonal().setOnes();
  return params;
}

DcmmParams random_dcmm(Index n, Index k, Index pure_per_community, double off_diagonal,
                       double theta_lo, double theta_hi, double alpha, std::uint64_t seed) {
  if (n < k * pure_per_community) throw InvalidArgument("random_dcmm: n too small");
  Rng rng(seed);
  DcmmParams params;
  params.theta.resize(n);
  for (Index i = 0; i < n; ++i) params.theta(i) = rng.uniform(theta_lo, theta_hi);
  params.pi = Eigen::MatrixXd::Zero(n, k);
  Index row = 0;
  for (Index c = 0; c < k; ++c) {
    for (Index r = 0; r < pure_per_community; ++r) params.pi(row++, c) = 1.0;
  }
  const std::vector<double> alphas(static_cast<std::size_t>(k), alpha);
  for (; row < n; ++row) {
    const auto w = rng.dirichlet(alphas);
    for (Index c = 0; c < k; ++c) params.pi(row, c) = w[c];
  }
  params.p_matrix = Eigen::MatrixXd::Constant(k, k, off_diagonal);
  params.p_matrix.diagonal().setOnes();
  return params;
}

PlsiParams anchor_topic_model(Index p, Index n, Index k, Index anchors, double alpha,
                              std::uint64_t seed) {
  if (p < k * anchors + 1) throw InvalidArgument("anchor_topic_model: vocabulary too small");
  if (n < k) throw InvalidArgument("anchor_topic_model: need at least one document per topic");
  Rng rng(seed);
  PlsiParams params;
  params.a_matrix = Eigen::MatrixXd::Zero(p, k);
  Index word = 0;
  for (Index t = 0; t < k; ++t) {
    for (Index r = 0; r < anchors; ++r) params.a_matrix(word++, t) = rng.uniform(0.5, 1.5);
  }
  for (; word < p; ++word) {
    for (Index t = 0; t < k; ++t) params.a_matrix(word, t) = rng.uniform(0.1, 1.0);
  }
  for (Index t = 0; t < k; ++t) params.a_matrix.col(t) /= params.a_matrix.col(t).sum();

  params.w_matrix = Eigen::MatrixXd::Zero(k, n);
  for (Index t = 0; t < k; ++t) params.w_matrix(t, t) = 1.0;
  const std::vector<double> alphas(static_cast<std::size_t>(k), alpha);
  for (Index i = k; i < n; ++i) {
    const auto w = rng.dirichlet(alphas);
    for (Index t = 0; t < k; ++t) params.w_matrix(t, i) = w[t];
  }
  return params;
}

}  // namespace scorenet
