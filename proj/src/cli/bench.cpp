#include <algorithm>
#include <fstream>
#include <map>

#include "common.hpp"
#include "scorenet/community.hpp"
#include "scorenet/error.hpp"
#include "scorenet/mixed_membership.hpp"
#include "scorenet/models.hpp"
#include "scorenet/rng.hpp"

namespace scorenet::cli {

namespace {

struct Row {
  std::string metric;
  double value;
};

using Settings = std::map<std::string, double>;

double setting(const Settings& s, const std::string& key) {
  const auto it = s.find(key);
  if (it == s.end()) throw InvalidArgument("bench: missing setting '" + key + "'");
  return it->second;
}

std::vector<Row> vertex_hunting_cell(const Settings& s, const std::string& method, std::uint64_t seed) {
  const Index n = static_cast<Index>(setting(s, "n"));
  const Index pure = static_cast<Index>(setting(s, "pure"));
  const DcmmParams params = vertex_hunting_setting(n, pure, setting(s, "beta"), seed);
  const Eigen::MatrixXd omega = expected_adjacency(params).omega;
  const EigenPairs truth = eigs_sym(omega, 3);
  const Eigen::MatrixXd truth_ratios = column_ratios(truth.vectors, std::numeric_limits<double>::infinity());
  Eigen::MatrixXd true_vertices(3, 2);
  const auto pure_rows = params.pure_nodes();
  for (Index c = 0; c < 3; ++c) true_vertices.row(c) = truth_ratios.row(pure_rows[c].front());

  const Graph g = sample_adjacency(omega, derive_seed(seed, 1));
  EigenPairs eig = eigs_sym(g.adjacency(), 3);
  align_signs(eig, truth);
  MixedScoreOptions opts;
  opts.vh_method = parse_vh_method(method);
  const MembershipEstimate est =
      mixed_score_from_eigenpairs(eig, 3, default_threshold(n), opts, derive_seed(seed, 2));
  return {{"vertex_error", vertex_error(est.vertices.vertices, true_vertices)},
          {"membership_mse", membership_mse(est.pi_hat, params.pi)},
          {"max_row_l1_error", max_row_l1_error(est.pi_hat, params.pi)}};
}

std::vector<Row> community_cell(const Settings& s, const std::string& method, std::uint64_t seed) {
  const DcmmParams params = heterogeneous_two_block(static_cast<Index>(setting(s, "n")), setting(s, "a"),
                                                    setting(s, "b"), setting(s, "c"), seed);
  const Component comp = giant_component(sample_dcmm(params, derive_seed(seed, 1)));
  const std::vector<int> all = dominant_labels(params.pi);
  std::vector<int> truth;
  for (Index i : comp.to_original) truth.push_back(all[i]);
  const ClusterResult res = spectral_cluster(comp.graph, 2, MethodConfig::preset(method), derive_seed(seed, 2));
  const HammingError err = hamming_error(res.labels, truth);
  return {{"hamming_error", static_cast<double>(err.count)}, {"error_rate", err.rate}};
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

void register_bench(CLI::App& root, std::vector<Command>& commands) {
  struct Opts {
    std::string config;
    std::string output = "results.csv";
  };
  auto o = std::make_shared<Opts>();
  CLI::App* sub = root.add_subcommand("bench", "Seeded parameter sweep described by a JSON config");
  sub->add_option("--config", o->config, "Sweep description (JSON)")->required()->check(CLI::ExistingFile);
  sub->add_option("--output", o->output, "Name of the long-format results CSV");
  auto common = add_common(sub);
  commands.push_back({sub, common, [o](Context& ctx) {
    Json sweep;
    try {
      std::ifstream in(o->config);
      sweep = Json::parse(in);
    } catch (const Json::exception& e) {
      throw InvalidArgument(o->config + ": " + e.what());
    }
    const std::string scenario = sweep.value("scenario", "");
    Settings base;
    std::vector<std::string> methods;
    if (scenario == "vertex_hunting") {
      base = {{"n", 500}, {"pure", 50}, {"beta", 0.5}};
      methods = {"sp", "svs0", "svs_plus"};
    } else if (scenario == "community") {
      base = {{"n", 1222}, {"a", 1}, {"b", 0.1}, {"c", 1}};
      methods = {"score", "osc"};
    } else {
      throw InvalidArgument("bench: scenario must be vertex_hunting or community");
    }
    if (sweep.contains("fixed")) {
      for (const auto& [key, value] : sweep["fixed"].items()) {
        if (!base.count(key)) throw InvalidArgument("bench: unknown setting '" + key + "' for " + scenario);
        base[key] = value.get<double>();
      }
    }
    const std::string param = sweep.value("param", "");
    if (!base.count(param)) throw InvalidArgument("bench: param '" + param + "' is not a setting of " + scenario);
    if (!sweep.contains("grid") || !sweep["grid"].is_array() || sweep["grid"].empty()) {
      throw InvalidArgument("bench: grid must be a nonempty array");
    }
    const std::vector<double> grid = sweep["grid"].get<std::vector<double>>();
    if (sweep.contains("methods")) methods = sweep["methods"].get<std::vector<std::string>>();
    if (methods.empty()) throw InvalidArgument("bench: methods must be nonempty");
    for (const std::string& m : methods) {
      if (scenario == "vertex_hunting") {
        parse_vh_method(m);
      } else {
        MethodConfig::preset(m);
      }
    }
    const int reps = sweep.value("reps", 1);
    if (reps < 1) throw InvalidArgument("bench: reps must be positive");
    const std::uint64_t seed = sweep.value("seed", ctx.seed());
    ctx.report.seed = seed;
    ctx.report.config["sweep"] = sweep;

    std::ofstream out(ctx.artifact(o->output), std::ios::binary);
    out << "param,method,rep,metric,value\n";
    Json summary = Json::array();
    for (double value : grid) {
      Settings s = base;
      s[param] = value;
      for (const std::string& method : methods) {
        std::map<std::string, std::vector<double>> collected;
        std::vector<std::string> order;
        for (int rep = 0; rep < reps; ++rep) {
          const std::uint64_t rep_seed = seed + static_cast<std::uint64_t>(rep);
          const std::vector<Row> rows = scenario == "vertex_hunting" ? vertex_hunting_cell(s, method, rep_seed)
                                                                     : community_cell(s, method, rep_seed);
          for (const Row& r : rows) {
            out << format_number(value) << ',' << method << ',' << rep << ',' << r.metric << ','
                << format_number(r.value) << '\n';
            if (!collected.count(r.metric)) order.push_back(r.metric);
            collected[r.metric].push_back(r.value);
          }
        }
        Json cell{{"param", value}, {"method", method}};
        for (const std::string& m : order) cell["median_" + m] = median(collected[m]);
        summary.push_back(cell);
      }
    }
    ctx.report.metrics["cells"] = summary;
  }});
}

}  // namespace scorenet::cli
