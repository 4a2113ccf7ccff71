#include <fstream>
#include <functional>

#include "common.hpp"
#include "scorenet/community.hpp"
#include "scorenet/error.hpp"
#include "scorenet/inference.hpp"
#include "scorenet/io.hpp"
#include "scorenet/mixed_membership.hpp"
#include "scorenet/models.hpp"
#include "scorenet/rng.hpp"
#include "scorenet/topics.hpp"

namespace scorenet::cli {

namespace {

struct GraphInput {
  std::string path;
  bool one_indexed = false;
  bool giant = false;
};

void add_graph_input(CLI::App* sub, GraphInput& in) {
  sub->add_option("--input", in.path, "Edge list: one 'u v' pair per line")->required()->check(CLI::ExistingFile);
  sub->add_flag("--one-indexed", in.one_indexed, "Node ids in the file start at 1");
  sub->add_flag("--giant", in.giant, "Restrict to the largest connected component");
}

struct LoadedGraph {
  Graph graph;
  std::vector<Index> to_original;
  Index original_n = 0;
};

LoadedGraph load(const GraphInput& in, Context& ctx, bool directed = false) {
  LoadedGraph out;
  out.graph = read_graph(in.path, directed, in.one_indexed);
  out.original_n = out.graph.n();
  out.to_original.resize(static_cast<std::size_t>(out.graph.n()));
  for (Index i = 0; i < out.graph.n(); ++i) out.to_original[i] = i;
  if (in.giant) {
    Component comp = giant_component(out.graph);
    out.graph = std::move(comp.graph);
    out.to_original = std::move(comp.to_original);
  }
  ctx.report.metrics["n"] = out.graph.n();
  ctx.report.metrics["edges"] = out.graph.edge_count();
  return out;
}

std::vector<int> to_original_labels(const LoadedGraph& g, const std::vector<int>& labels) {
  std::vector<int> out(static_cast<std::size_t>(g.original_n), -1);
  for (std::size_t i = 0; i < labels.size(); ++i) out[g.to_original[i]] = labels[i];
  return out;
}

void add_generate(CLI::App& root, std::vector<Command>& commands) {
  struct Opts {
    std::string model;
    Index n = 100, k = 2, pure = 10, p = 200, anchors = 3;
    double off = 0.1, theta_lo = 0.5, theta_hi = 1.0, alpha = 1.0, beta = 0.5, a = 1.0, b = 0.1, c = 1.0;
    long length = 1000;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* sub = root.add_subcommand("generate", "Sample a synthetic network or corpus");
  sub->add_option("model", o->model, "dcbm, dcmm, hetero, vh or plsi")
      ->required()
      ->check(CLI::IsMember({"dcbm", "dcmm", "hetero", "vh", "plsi"}));
  sub->add_option("--n", o->n, "Nodes (documents for plsi)");
  sub->add_option("--k", o->k, "Communities or topics");
  sub->add_option("--off", o->off, "Off-diagonal entry of P");
  sub->add_option("--theta-lo", o->theta_lo, "Lower end of the theta range");
  sub->add_option("--theta-hi", o->theta_hi, "Upper end of the theta range");
  sub->add_option("--pure", o->pure, "Pure nodes per community (dcmm, vh)");
  sub->add_option("--alpha", o->alpha, "Dirichlet concentration of mixed rows or documents");
  sub->add_option("--beta", o->beta, "Common theta of the vertex-hunting setting");
  sub->add_option("--a", o->a, "P(1,1) of the heterogeneous setting");
  sub->add_option("--b", o->b, "P(1,2) of the heterogeneous setting");
  sub->add_option("--c", o->c, "P(2,2) of the heterogeneous setting");
  sub->add_option("--p", o->p, "Vocabulary size (plsi)");
  sub->add_option("--anchors", o->anchors, "Anchor words per topic (plsi)");
  sub->add_option("--length", o->length, "Words per document (plsi)");
  auto common = add_common(sub);
  commands.push_back({sub, common, [o](Context& ctx) {
    const std::uint64_t seed = ctx.seed();
    if (o->model == "plsi") {
      const PlsiParams params = anchor_topic_model(o->p, o->n, o->k, o->anchors, o->alpha, seed);
      const std::vector<long> lengths(static_cast<std::size_t>(o->n), o->length);
      const Corpus corpus = sample_plsi(params, lengths, derive_seed(seed, 1));
      write_corpus(ctx.artifact("corpus.txt"), ctx.artifact("vocab.txt"), corpus);
      write_rows_csv(ctx.artifact("topics.csv"), "word", "topic", params.a_matrix);
      write_rows_csv(ctx.artifact("weights.csv"), "doc", "topic", params.w_matrix.transpose());
      ctx.report.metrics["words"] = o->p;
      ctx.report.metrics["documents"] = o->n;
      return;
    }
    DcmmParams params;
    if (o->model == "dcbm") {
      Rng rng(seed);
      Eigen::VectorXd theta(o->n);
      for (Index i = 0; i < o->n; ++i) theta(i) = rng.uniform(o->theta_lo, o->theta_hi);
      params = balanced_dcbm(theta, o->k, o->off);
    } else if (o->model == "hetero") {
      params = heterogeneous_two_block(o->n, o->a, o->b, o->c, seed);
    } else if (o->model == "dcmm") {
      params = random_dcmm(o->n, o->k, o->pure, o->off, o->theta_lo, o->theta_hi, o->alpha, seed);
    } else {
      params = vertex_hunting_setting(o->n, o->pure, o->beta, seed);
    }
    const Graph g = sample_dcmm(params, derive_seed(seed, 1));
    write_edge_list(ctx.artifact("graph.edges"), g);
    write_labels_csv(ctx.artifact("labels.csv"), dominant_labels(params.pi));
    if (o->model == "dcmm" || o->model == "vh") write_rows_csv(ctx.artifact("memberships.csv"), "node", "pi", params.pi);
    ctx.report.metrics["n"] = g.n();
    ctx.report.metrics["edges"] = g.edge_count();
    ctx.report.metrics["connected"] = g.connected();
  }});
}

void add_detect(CLI::App& root, std::vector<Command>& commands) {
  struct Opts {
    GraphInput in;
    Index k = 2;
    std::string method = "score";
    std::string truth;
    std::optional<double> threshold;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* sub = root.add_subcommand("detect", "Cluster nodes into k communities");
  add_graph_input(sub, o->in);
  sub->add_option("--k", o->k, "Number of communities")->required();
  sub->add_option("--method", o->method,
                  "score, osc, rsc, lap0, lap1, glm0, glm1, score1, score2, score_plus, score_star or dscore");
  sub->add_option("--truth", o->truth, "CSV node,label for scoring")->check(CLI::ExistingFile);
  sub->add_option("--threshold", o->threshold, "Ratio threshold T");
  auto common = add_common(sub);
  commands.push_back({sub, common, [o](Context& ctx) {
    std::vector<int> labels;
    LoadedGraph g;
    if (o->method == "dscore") {
      g = load(o->in, ctx, true);
      const DScoreResult res = dscore(g.graph, o->k, o->threshold, ctx.seed());
      labels = res.clusters.labels;
      ctx.report.metrics["inertia"] = res.clusters.inertia;
      ctx.report.metrics["off_support"] = res.off_support;
    } else {
      MethodConfig cfg = MethodConfig::preset(o->method);
      if (o->threshold) cfg.threshold = o->threshold;
      g = load(o->in, ctx);
      const ClusterResult res = spectral_cluster(g.graph, o->k, cfg, ctx.seed());
      labels = res.labels;
      ctx.report.metrics["inertia"] = res.inertia;
    }
    const std::vector<int> full = to_original_labels(g, labels);
    write_labels_csv(ctx.artifact("labels.csv"), full);
    if (!o->truth.empty()) {
      const std::vector<int> truth = load_labels(o->truth, g.original_n);
      std::vector<int> a, b;
      for (std::size_t i = 0; i < full.size(); ++i) {
        if (full[i] >= 0 && truth[i] >= 0) {
          a.push_back(full[i]);
          b.push_back(truth[i]);
        }
      }
      const HammingError err = hamming_error(a, b);
      ctx.report.metrics["errors_vs_truth"] = err.count;
      ctx.report.metrics["error_rate"] = err.rate;
      ctx.report.metrics["scored_nodes"] = a.size();
    }
  }});
}

void add_mixed(CLI::App& root, std::vector<Command>& commands) {
  struct Opts {
    GraphInput in;
    Index k = 2;
    std::string vh = "svs_plus";
    std::string truth;
    std::optional<double> threshold;
    VhParams vh_params;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* sub = root.add_subcommand("mixed", "Estimate mixed memberships with Mixed-SCORE");
  add_graph_input(sub, o->in);
  sub->add_option("--k", o->k, "Number of communities")->required();
  sub->add_option("--vh", o->vh, "Vertex hunting: sp, cvs, svs0, svs_star, svs_plus");
  sub->add_option("--truth", o->truth, "CSV node,pi_1,...,pi_K for scoring")->check(CLI::ExistingFile);
  sub->add_option("--threshold", o->threshold, "Ratio threshold T");
  sub->add_option("--local-centers", o->vh_params.local_centers, "L for svs0 and svs_star");
  sub->add_option("--knn-m", o->vh_params.knn_min_neighbors, "m for svs_plus");
  sub->add_option("--knn-n", o->vh_params.knn_average, "N for svs_plus");
  auto common = add_common(sub);
  commands.push_back({sub, common, [o](Context& ctx) {
    const LoadedGraph g = load(o->in, ctx);
    MixedScoreOptions opts;
    opts.vh_method = parse_vh_method(o->vh);
    opts.vh_params = o->vh_params;
    opts.threshold = o->threshold;
    const MembershipEstimate est = mixed_score(g.graph, o->k, opts, ctx.seed());
    std::vector<std::string> names;
    for (Index i : g.to_original) names.push_back(std::to_string(i));
    write_rows_csv(ctx.artifact("memberships.csv"), "node", "pi", est.pi_hat, names);
    ctx.report.metrics["fallback_rows"] = est.fallback_rows;
    ctx.report.metrics["b1_hat"] = vector_json(est.b1_hat);
    ctx.report.metrics["vertices"] = matrix_json(est.vertices.vertices);
    ctx.report.metrics["vh_candidates"] = est.vertices.candidate_count;
    ctx.report.metrics["vh_max_residual"] = est.vertices.max_residual;
    if (!o->truth.empty()) {
      const Eigen::MatrixXd truth_all = read_rows_csv(o->truth);
      if (truth_all.rows() != g.original_n || truth_all.cols() != o->k) {
        throw InvalidArgument("--truth must hold one row per node and k membership columns");
      }
      Eigen::MatrixXd truth(g.graph.n(), o->k);
      for (Index i = 0; i < g.graph.n(); ++i) truth.row(i) = truth_all.row(g.to_original[i]);
      ctx.report.metrics["membership_mse"] = membership_mse(est.pi_hat, truth);
      ctx.report.metrics["max_row_l1_error"] = max_row_l1_error(est.pi_hat, truth);
    }
  }});
}

void add_dynamic(CLI::App& root, std::vector<Command>& commands) {
  struct Opts {
    std::vector<std::string> inputs;
    bool one_indexed = false;
    Index k = 2;
    std::string vh = "svs_plus";
    bool pool = false;
    std::optional<double> threshold;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* sub = root.add_subcommand("dynamic", "Mixed-SCORE across snapshots against the first snapshot's spectrum");
  sub->add_option("--input", o->inputs, "Snapshot edge lists in time order")->required()->check(CLI::ExistingFile);
  sub->add_flag("--one-indexed", o->one_indexed, "Node ids in the files start at 1");
  sub->add_option("--k", o->k, "Number of communities")->required();
  sub->add_option("--vh", o->vh, "Vertex hunting: sp, cvs, svs0, svs_star, svs_plus");
  sub->add_flag("--pool", o->pool, "Hunt vertices once on the pooled clouds");
  sub->add_option("--threshold", o->threshold, "Ratio threshold T");
  auto common = add_common(sub);
  commands.push_back({sub, common, [o](Context& ctx) {
    std::vector<Graph> snapshots;
    Index n = 0;
    for (const std::string& path : o->inputs) {
      snapshots.push_back(read_graph(path, false, o->one_indexed));
      n = std::max(n, snapshots.back().n());
    }
    // Snapshots may omit trailing isolated nodes; pad to a common node set.
    for (Graph& g : snapshots) {
      if (g.n() < n) g = Graph(n, g.edges());
    }
    DynamicOptions opts;
    opts.base.vh_method = parse_vh_method(o->vh);
    opts.base.threshold = o->threshold;
    opts.pool = o->pool;
    const DynamicResult res = dynamic_mixed_score(snapshots, o->k, opts, ctx.seed());
    for (std::size_t t = 0; t < res.snapshots.size(); ++t) {
      write_rows_csv(ctx.artifact("memberships_t" + std::to_string(t + 1) + ".csv"), "node", "pi",
                     res.snapshots[t].pi_hat);
    }
    std::ofstream traj(ctx.artifact("trajectories.csv"), std::ios::binary);
    traj << "node,t";
    for (Index c = 0; c < o->k; ++c) traj << ",dist_to_v" << c + 1;
    traj << '\n';
    for (const TrajectoryRow& row : trajectories(res)) {
      traj << row.node << ',' << row.t;
      for (double d : row.distances) traj << ',' << format_number(d);
      traj << '\n';
    }
    ctx.report.metrics["snapshots"] = snapshots.size();
    ctx.report.metrics["n"] = n;
    ctx.report.metrics["threshold"] = res.threshold;
    ctx.report.metrics["reference_eigenvalues"] = vector_json(res.reference.values);
    Json fallbacks = Json::array();
    for (const auto& s : res.snapshots) fallbacks.push_back(s.fallback_rows);
    ctx.report.metrics["fallback_rows"] = fallbacks;
  }});
}

void add_topics(CLI::App& root, std::vector<Command>& commands) {
  struct Opts {
    std::string counts, vocab, citations;
    Index k = 2, top = 3;
    std::string vh = "svs_plus";
    std::optional<double> threshold;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* sub = root.add_subcommand("topics", "Topic-SCORE on a corpus, optionally TR-SCORE on citations");
  sub->add_option("--counts", o->counts, "Triplets 'doc word count' per line")->required()->check(CLI::ExistingFile);
  sub->add_option("--vocab", o->vocab, "One word per line")->required()->check(CLI::ExistingFile);
  sub->add_option("--k", o->k, "Number of topics")->required();
  sub->add_option("--vh", o->vh, "Vertex hunting: sp, cvs, svs0, svs_star, svs_plus");
  sub->add_option("--top", o->top, "Anchor words reported per topic");
  sub->add_option("--threshold", o->threshold, "Clip word-space ratios at +-T");
  sub->add_option("--citations", o->citations, "CSV citing,cited[,count]")->check(CLI::ExistingFile);
  auto common = add_common(sub);
  commands.push_back({sub, common, [o](Context& ctx) {
    const Corpus corpus = load_corpus(o->counts, o->vocab);
    TopicOptions opts;
    opts.vh_method = parse_vh_method(o->vh);
    opts.threshold = o->threshold;
    const TopicEstimate est = topic_score(corpus, o->k, opts, ctx.seed());
    write_rows_csv(ctx.artifact("a_hat.csv"), "word", "topic", est.a_hat, corpus.vocab);
    write_rows_csv(ctx.artifact("w_hat.csv"), "doc", "topic", est.w_hat.transpose());
    ctx.report.metrics["words"] = corpus.p();
    ctx.report.metrics["documents"] = corpus.n();
    ctx.report.metrics["dropped_words"] = est.dropped_words.size();
    Json anchors = Json::array();
    for (const TopicAnchors& t : anchor_diagnostics(est, o->top)) {
      Json words = Json::array();
      for (Index w : t.words) words.push_back(corpus.vocab[static_cast<std::size_t>(w)]);
      anchors.push_back({{"words", words}, {"scores", t.scores}, {"weak", t.weak}});
    }
    ctx.report.metrics["anchors"] = anchors;
    if (!o->citations.empty()) {
      const TrScoreResult tr = tr_score(est.w_hat, load_citations(o->citations));
      ctx.report.metrics["mu"] = vector_json(tr.mu);
      ctx.report.metrics["ranking"] = tr.ranking;
      ctx.report.metrics["gradient_norm"] = tr.gradient_norm;
    }
  }});
}

void add_testglobal(CLI::App& root, std::vector<Command>& commands) {
  auto in = std::make_shared<GraphInput>();
  CLI::App* sub = root.add_subcommand("testglobal", "SgnQ test of a single community");
  add_graph_input(sub, *in);
  auto common = add_common(sub);
  commands.push_back({sub, common, [in](Context& ctx) {
    const SgnqResult r = sgnq(load(*in, ctx).graph);
    ctx.report.metrics["q_n"] = r.q_n;
    ctx.report.metrics["phi_n"] = r.phi_n;
    ctx.report.metrics["eta_norm_sq"] = r.eta_norm_sq;
    ctx.report.metrics["p_value"] = r.p_value;
  }});
}

void add_estimate_k(CLI::App& root, std::vector<Command>& commands) {
  struct Opts {
    GraphInput in;
    GofOptions gof;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* sub = root.add_subcommand("estimate-k", "Stepwise goodness-of-fit estimate of K");
  add_graph_input(sub, o->in);
  sub->add_option("--alpha", o->gof.alpha, "Test level");
  sub->add_option("--m-max", o->gof.m_max, "Largest K tried")->check(CLI::Range(1, 12));
  sub->add_option("--bootstrap", o->gof.bootstrap, "Parametric bootstrap resamples per step");
  auto common = add_common(sub);
  commands.push_back({sub, common, [o](Context& ctx) {
    const GofTrace trace = stepwise_gof(load(o->in, ctx).graph, o->gof, ctx.seed());
    ctx.report.metrics["psi"] = trace.psi;
    ctx.report.metrics["q"] = trace.q;
    ctx.report.metrics["bias"] = trace.bias;
    ctx.report.metrics["c_n"] = trace.c_n;
    ctx.report.metrics["z_alpha"] = trace.z_alpha;
    ctx.report.metrics["k_hat"] = trace.k_hat ? Json(*trace.k_hat) : Json(nullptr);
  }});
}

void add_gof(CLI::App& root, std::vector<Command>& commands) {
  struct Opts {
    GraphInput in;
    Index k = 2;
    std::string labels;
    int bootstrap = 30;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* sub = root.add_subcommand("gof", "Goodness of fit of a K-community DCBM");
  add_graph_input(sub, o->in);
  sub->add_option("--k", o->k, "Number of communities (SCORE labels)")->required();
  sub->add_option("--labels", o->labels, "CSV node,label to use instead of SCORE")->check(CLI::ExistingFile);
  sub->add_option("--bootstrap", o->bootstrap, "Parametric bootstrap resamples");
  auto common = add_common(sub);
  commands.push_back({sub, common, [o](Context& ctx) {
    const LoadedGraph g = load(o->in, ctx);
    std::vector<int> labels;
    if (!o->labels.empty()) {
      const std::vector<int> all = load_labels(o->labels, g.original_n);
      for (Index i : g.to_original) {
        if (all[i] < 0) throw InvalidArgument("--labels leaves node " + std::to_string(i) + " unlabelled");
        labels.push_back(all[i]);
      }
    } else if (o->k == 1) {
      labels.assign(static_cast<std::size_t>(g.graph.n()), 0);
    } else {
      labels = spectral_cluster(g.graph, o->k, MethodConfig{}, ctx.seed()).labels;
    }
    const long long c_n = count_quadrilaterals(g.graph);
    const GofStep step = gof_statistic(g.graph, labels, c_n, o->bootstrap, derive_seed(ctx.seed(), 1));
    ctx.report.metrics["psi"] = step.psi;
    ctx.report.metrics["q"] = step.q;
    ctx.report.metrics["bias"] = step.bias;
    ctx.report.metrics["c_n"] = c_n;
    ctx.report.metrics["p_value"] = 0.5 * std::erfc(step.psi / std::sqrt(2.0));
  }});
}

Json tree_json(const TreeNode& node) {
  Json out;
  out["name"] = node.name;
  out["size"] = node.members.size();
  out["p_value"] = node.p_value;
  out["split_k"] = node.split_k;
  out["residual"] = node.residual;
  out["members"] = node.members;
  Json children = Json::array();
  for (const TreeNode& c : node.children) children.push_back(tree_json(c));
  out["children"] = children;
  return out;
}

void add_hier(CLI::App& root, std::vector<Command>& commands) {
  struct Opts {
    GraphInput in;
    HierOptions hier;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* sub = root.add_subcommand("hier", "Hier-SCORE community tree");
  add_graph_input(sub, o->in);
  sub->add_option("--alpha0", o->hier.alpha0, "A node stays a leaf when its SgnQ p-value exceeds alpha0");
  sub->add_option("--min-size", o->hier.min_split_size, "Smallest community that may be split");
  sub->add_option("--k-max", o->hier.k_max, "Largest split K for the scree rule");
  sub->add_option("--fixed-k", o->hier.fixed_k, "Split K per depth instead of the scree rule");
  sub->add_option("--max-depth", o->hier.max_depth, "Depth cap");
  sub->add_option("--c0", o->hier.c0, "Eigenvalue shift of SCORE*");
  auto common = add_common(sub);
  commands.push_back({sub, common, [o](Context& ctx) {
    const CommunityTree tree = hier_score(load(o->in, ctx).graph, o->hier, ctx.seed());
    std::ofstream(ctx.artifact("tree.txt"), std::ios::binary) << tree_text(tree);
    std::ofstream(ctx.artifact("tree.json"), std::ios::binary) << tree_json(tree.root).dump(2) << '\n';
    ctx.report.metrics["leaves"] = tree.leaves().size();
    Json sizes = Json::array();
    for (const TreeNode* leaf : tree.leaves()) sizes.push_back({{"name", leaf->name}, {"size", leaf->members.size()}});
    ctx.report.metrics["leaf_sizes"] = sizes;
  }});
}

}  // namespace

void register_commands(CLI::App& root, std::vector<Command>& commands) {
  add_generate(root, commands);
  add_detect(root, commands);
  add_mixed(root, commands);
  add_dynamic(root, commands);
  add_topics(root, commands);
  add_testglobal(root, commands);
  add_estimate_k(root, commands);
  add_gof(root, commands);
  add_hier(root, commands);
}

}  // namespace scorenet::cli
