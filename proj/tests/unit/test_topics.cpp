#include <gtest/gtest.h>

#include <cmath>

#include "scorenet/error.hpp"
#include "scorenet/models.hpp"
#include "scorenet/rng.hpp"
#include "scorenet/topics.hpp"
#include "test_support.hpp"

namespace scorenet {
namespace {

TopicOptions sp_options() {
  TopicOptions o;
  o.vh_method = VhMethod::sp;
  return o;
}

void expect_pmf_columns(const Eigen::MatrixXd& m) {
  EXPECT_GE(m.minCoeff(), 0.0);
  EXPECT_LT((m.colwise().sum().array() - 1.0).abs().maxCoeff(), 1e-10);
}

double citation_loglik(const Eigen::MatrixXd& w, const CitationPairs& c, const Eigen::VectorXd& mu) {
  double total = 0.0;
  for (const auto& pair : c.pairs) {
    const double s = mu.dot(w.col(pair.citing) - w.col(pair.cited));
    total -= pair.count * std::log1p(std::exp(-s));
  }
  return total;
}

CitationPairs simulated_citations(const Eigen::MatrixXd& w, const Eigen::VectorXd& mu, int count,
                                  std::uint64_t seed) {
  Rng rng(seed);
  CitationPairs c;
  const auto n = static_cast<std::uint64_t>(w.cols());
  while (static_cast<int>(c.pairs.size()) < count) {
    const auto a = static_cast<Index>(rng.below(n));
    const auto b = static_cast<Index>(rng.below(n));
    if (a == b) continue;
    const double p = 1.0 / (1.0 + std::exp(-mu.dot(w.col(a) - w.col(b))));
    if (rng.bernoulli(p)) {
      c.pairs.push_back({a, b, 1.0});
    } else {
      c.pairs.push_back({b, a, 1.0});
    }
  }
  return c;
}

TEST(TopicScore, OracleRecoversTopicMatrix) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const PlsiParams params = anchor_topic_model(60, 120, 3, 3, 0.5, seed);
    const TopicEstimate est = topic_score(expected_corpus(params), 3, sp_options());
    EXPECT_LE(topic_l1_error(est.a_hat, params.a_matrix), 1e-8) << "seed " << seed;
  }
}

TEST(TopicScore, SingleTopic) {
  const PlsiParams params = anchor_topic_model(20, 30, 2, 2, 0.5, 3);
  const Corpus corpus = sample_plsi(params, std::vector<long>(30, 200), 4);
  const TopicEstimate est = topic_score(corpus, 1);
  const Eigen::VectorXd freq = corpus.d_matrix.rowwise().sum() / corpus.d_matrix.sum();
  EXPECT_LT((est.a_hat.col(0) - freq).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_EQ(est.w_hat, Eigen::MatrixXd::Ones(1, 30));
}

TEST(TopicScore, RejectsRankDeficientInput) {
  Corpus corpus;
  corpus.d_matrix = Eigen::MatrixXd::Ones(5, 4);
  corpus.lengths.assign(4, 5);
  EXPECT_THROW(topic_score(corpus, 3), InvalidArgument);
  EXPECT_THROW(topic_score(corpus, 6), InvalidArgument);
}

TEST(TopicScore, ZeroFrequencyWordsDropped) {
  const PlsiParams params = anchor_topic_model(30, 60, 2, 3, 0.5, 2);
  Corpus corpus = sample_plsi(params, std::vector<long>(60, 300), 1);
  corpus.d_matrix.row(7).setZero();
  corpus.d_matrix.row(20).setZero();
  const TopicEstimate est = topic_score(corpus, 2, {}, 3);
  EXPECT_EQ(est.dropped_words, (std::vector<Index>{7, 20}));
  EXPECT_EQ(est.a_hat.row(7).norm(), 0.0);
  EXPECT_EQ(est.a_hat.row(20).norm(), 0.0);
}

TEST(TopicScoreProperty, EstimatesAreColumnPmfs) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const PlsiParams params = anchor_topic_model(50, 100, 3, 3, 0.5, seed);
    const Corpus corpus = sample_plsi(params, std::vector<long>(100, 500), seed + 1);
    for (VhMethod m : {VhMethod::sp, VhMethod::svs_plus}) {
      TopicOptions o;
      o.vh_method = m;
      const TopicEstimate est = topic_score(corpus, 3, o, seed);
      expect_pmf_columns(est.a_hat);
      expect_pmf_columns(est.w_hat);
    }
  }
}

TEST(TopicScoreProperty, VocabularyPermutationEquivariance) {
  const PlsiParams params = anchor_topic_model(40, 80, 3, 3, 0.5, 5);
  const Corpus corpus = sample_plsi(params, std::vector<long>(80, 400), 6);
  std::vector<Index> perm(40);
  for (Index j = 0; j < 40; ++j) perm[j] = (j * 7 + 3) % 40;
  Corpus moved = corpus;
  for (Index j = 0; j < 40; ++j) moved.d_matrix.row(perm[j]) = corpus.d_matrix.row(j);
  const TopicEstimate a = topic_score(corpus, 3, sp_options());
  const TopicEstimate b = topic_score(moved, 3, sp_options());
  Eigen::MatrixXd back(40, 3);
  for (Index j = 0; j < 40; ++j) back.row(j) = b.a_hat.row(perm[j]);
  EXPECT_LT(topic_l1_error(back, a.a_hat), 1e-8);
}

TEST(TopicScoreProperty, CountScaleInvariance) {
  const PlsiParams params = anchor_topic_model(40, 80, 3, 3, 0.5, 8);
  const Corpus corpus = sample_plsi(params, std::vector<long>(80, 400), 9);
  Corpus scaled = corpus;
  scaled.d_matrix *= 10.0;
  const TopicEstimate a = topic_score(corpus, 3, {}, 1);
  const TopicEstimate b = topic_score(scaled, 3, {}, 1);
  EXPECT_LT((a.a_hat - b.a_hat).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT((a.w_hat - b.w_hat).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Anchors, OracleAnchorsRankFirst) {
  const PlsiParams params = anchor_topic_model(60, 120, 3, 3, 0.5, 1);
  const TopicEstimate est = topic_score(expected_corpus(params), 3, sp_options());
  const auto anchors = anchor_diagnostics(est, 3);
  ASSERT_EQ(anchors.size(), 3u);
  for (const TopicAnchors& t : anchors) {
    ASSERT_EQ(t.words.size(), 3u);
    EXPECT_FALSE(t.weak);
    const Index topic = t.words[0] / 3;
    for (Index w : t.words) {
      EXPECT_EQ(w / 3, topic);
      EXPECT_LT(w, 9);
    }
    EXPECT_NEAR(t.scores[0], 1.0, 1e-8);
  }
  EXPECT_TRUE(anchor_diagnostics(est, 0)[0].words.empty());
}

TEST(Anchors, UniformWeightsAreWeak) {
  TopicEstimate est;
  est.alpha = Eigen::MatrixXd::Constant(10, 2, 0.5);
  est.a_hat = Eigen::MatrixXd::Constant(10, 2, 0.1);
  const auto anchors = anchor_diagnostics(est, 2);
  EXPECT_TRUE(anchors[0].weak);
  EXPECT_TRUE(anchors[1].weak);
}

TEST(TrScore, SymmetricCitationsGiveZeroMu) {
  const Eigen::MatrixXd w = Eigen::MatrixXd::Identity(2, 2);
  CitationPairs c;
  c.pairs = {{0, 1, 3.0}, {1, 0, 3.0}};
  const TrScoreResult r = tr_score(w, c);
  EXPECT_LT(r.mu.cwiseAbs().maxCoeff(), 1e-9);
}

TEST(TrScore, RecoversPlantedMu) {
  const PlsiParams params = anchor_topic_model(20, 300, 2, 2, 0.3, 3);
  const Eigen::Vector2d mu(1.0, -1.0);
  const CitationPairs c = simulated_citations(params.w_matrix, mu, 8000, 4);
  const TrScoreResult r = tr_score(params.w_matrix, c);
  EXPECT_LT((r.mu - mu).cwiseAbs().maxCoeff(), 0.15);
  EXPECT_EQ(r.ranking, (std::vector<Index>{0, 1}));
  EXPECT_LE(r.gradient_norm, 1e-7);
}

TEST(TrScore, SeparatedCitationsThrow) {
  const Eigen::MatrixXd w = Eigen::MatrixXd::Identity(2, 2);
  CitationPairs c;
  c.pairs = {{0, 1, 1.0}, {0, 1, 1.0}};
  EXPECT_THROW(tr_score(w, c), NumericalError);
}

TEST(TrScore, InvalidCitations) {
  const Eigen::MatrixXd w = Eigen::MatrixXd::Identity(2, 2);
  CitationPairs self;
  self.pairs = {{1, 1, 1.0}};
  EXPECT_THROW(tr_score(w, self), InvalidArgument);
  CitationPairs outside;
  outside.pairs = {{0, 5, 1.0}};
  EXPECT_THROW(tr_score(w, outside), InvalidArgument);
}

TEST(TrScoreProperty, FitIsLocalMaximumOnSumZeroPlane) {
  const PlsiParams params = anchor_topic_model(20, 200, 3, 2, 0.5, 5);
  const Eigen::Vector3d truth(0.8, 0.0, -0.8);
  const CitationPairs c = simulated_citations(params.w_matrix, truth, 3000, 6);
  const TrScoreResult r = tr_score(params.w_matrix, c);
  EXPECT_NEAR(r.mu.sum(), 0.0, 1e-12);
  const double best = citation_loglik(params.w_matrix, c, r.mu);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Eigen::VectorXd delta = testing::random_matrix(3, 1, seed).col(0) * 0.05;
    delta.array() -= delta.mean();
    EXPECT_LT(citation_loglik(params.w_matrix, c, r.mu + delta), best);
  }
}

}  // namespace
}  // namespace scorenet
