#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "scorenet/community.hpp"
#include "scorenet/error.hpp"
#include "scorenet/inference.hpp"
#include "scorenet/io.hpp"
#include "scorenet/mixed_membership.hpp"
#include "scorenet/models.hpp"
#include "scorenet/topics.hpp"
#include "scorenet/vertex_hunt.hpp"

namespace py = pybind11;
using namespace scorenet;

namespace {

Graph make_graph(Index n, const std::vector<std::pair<Index, Index>>& edges, bool directed) {
  std::vector<Edge> list;
  list.reserve(edges.size());
  for (const auto& [u, v] : edges) list.push_back({u, v});
  return Graph(n, std::move(list), directed);
}

std::vector<std::pair<Index, Index>> edge_pairs(const Graph& g) {
  std::vector<std::pair<Index, Index>> out;
  out.reserve(g.edge_count());
  for (const Edge& e : g.edges()) out.emplace_back(e.u, e.v);
  return out;
}

py::dict tree_dict(const TreeNode& node) {
  py::dict d;
  d["name"] = node.name;
  d["members"] = node.members;
  d["p_value"] = node.p_value;
  d["split_k"] = node.split_k;
  d["residual"] = node.residual;
  py::list children;
  for (const TreeNode& child : node.children) children.append(tree_dict(child));
  d["children"] = children;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Spectral network and topic analysis";

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  py::class_<Graph>(m, "Graph")
      .def(py::init(&make_graph), py::arg("n"), py::arg("edges"), py::arg("directed") = false)
      .def_property_readonly("n", &Graph::n)
      .def_property_readonly("directed", &Graph::directed)
      .def_property_readonly("edges", &edge_pairs)
      .def("adjacency", &Graph::adjacency)
      .def("degrees", &Graph::degrees)
      .def("connected", &Graph::connected)
      .def("__len__", &Graph::n);

  m.def("load_edge_list", [](const std::string& path, bool directed, bool one_indexed) {
    return load_edge_list(path, directed, one_indexed);
  }, py::arg("path"), py::arg("directed") = false, py::arg("one_indexed") = false);
  m.def("giant_component", [](const Graph& g) {
    Component c = giant_component(g);
    return py::make_tuple(c.graph, c.to_original);
  });
  m.def("sample_adjacency", &sample_adjacency, py::arg("omega"), py::arg("seed"));

  m.def("spectral_cluster", [](const Graph& g, Index k, const std::string& method, std::uint64_t seed) {
    return spectral_cluster(g, k, MethodConfig::preset(method), seed).labels;
  }, py::arg("graph"), py::arg("k"), py::arg("method") = "score", py::arg("seed") = 0);
  m.def("hamming_error", [](const std::vector<int>& labels, const std::vector<int>& truth) {
    return hamming_error(labels, truth).count;
  });

  m.def("vertex_hunt", [](const Eigen::MatrixXd& points, Index k, const std::string& method, std::uint64_t seed) {
    return vertex_hunt(points, k, parse_vh_method(method), {}, seed).vertices;
  }, py::arg("points"), py::arg("k"), py::arg("method") = "svs_plus", py::arg("seed") = 0);

  m.def("mixed_score", [](const Graph& g, Index k, const std::string& vh, std::uint64_t seed) {
    MixedScoreOptions o;
    o.vh_method = parse_vh_method(vh);
    return mixed_score(g, k, o, seed).pi_hat;
  }, py::arg("graph"), py::arg("k"), py::arg("vh") = "svs_plus", py::arg("seed") = 0);

  m.def("sgnq", [](const Graph& g) {
    const SgnqResult r = sgnq(g);
    py::dict d;
    d["q_n"] = r.q_n;
    d["phi_n"] = r.phi_n;
    d["eta_norm_sq"] = r.eta_norm_sq;
    d["p_value"] = r.p_value;
    return d;
  });
  m.def("count_quadrilaterals", &count_quadrilaterals);
  m.def("estimate_k", [](const Graph& g, double alpha, int m_max, int bootstrap, std::uint64_t seed) {
    const GofTrace t = stepwise_gof(g, {alpha, m_max, bootstrap}, seed);
    py::dict d;
    d["k_hat"] = t.k_hat ? py::cast(*t.k_hat) : py::none();
    d["psi"] = t.psi;
    d["z_alpha"] = t.z_alpha;
    return d;
  }, py::arg("graph"), py::arg("alpha") = 0.05, py::arg("m_max") = 6, py::arg("bootstrap") = 30,
     py::arg("seed") = 0);
  m.def("hier_score", [](const Graph& g, double alpha0, std::vector<int> fixed_k, std::uint64_t seed) {
    HierOptions o;
    o.alpha0 = alpha0;
    o.fixed_k = std::move(fixed_k);
    return tree_dict(hier_score(g, o, seed).root);
  }, py::arg("graph"), py::arg("alpha0") = 0.001, py::arg("fixed_k") = std::vector<int>{}, py::arg("seed") = 0);

  m.def("topic_score", [](const Eigen::MatrixXd& counts, Index k, const std::string& vh, std::uint64_t seed) {
    Corpus corpus;
    corpus.d_matrix = counts;
    corpus.lengths.assign(static_cast<std::size_t>(counts.cols()), 0);
    TopicOptions o;
    o.vh_method = parse_vh_method(vh);
    const TopicEstimate est = topic_score(corpus, k, o, seed);
    return py::make_tuple(est.a_hat, est.w_hat);
  }, py::arg("counts"), py::arg("k"), py::arg("vh") = "svs_plus", py::arg("seed") = 0);
}
