#include "scorenet/graph.hpp"

#include <algorithm>
#include <queue>

#include "scorenet/error.hpp"

namespace scorenet {

Graph::Graph(Index n, std::vector<Edge> edges, bool directed) : n_(n), directed_(directed) {
  if (n < 0) throw InvalidArgument("Graph: negative node count");
  edges_.reserve(edges.size());
  for (Edge e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n) {
      throw InvalidArgument("Graph: edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                            ") outside [0, " + std::to_string(n) + ")");
    }
    if (e.u == e.v) continue;
    if (!directed && e.u > e.v) std::swap(e.u, e.v);
    edges_.push_back(e);
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

Eigen::MatrixXd Graph::adjacency() const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_, n_);
  for (const Edge& e : edges_) {
    a(e.u, e.v) = 1.0;
    if (!directed_) a(e.v, e.u) = 1.0;
  }
  return a;
}

std::vector<std::vector<Index>> Graph::neighbors() const {
  std::vector<std::vector<Index>> nb(static_cast<std::size_t>(n_));
  for (const Edge& e : edges_) {
    nb[e.u].push_back(e.v);
    if (!directed_) nb[e.v].push_back(e.u);
  }
  for (auto& list : nb) std::sort(list.begin(), list.end());
  return nb;
}

Eigen::VectorXd Graph::degrees() const {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(n_);
  for (const Edge& e : edges_) {
    d(e.u) += 1.0;
    if (!directed_) d(e.v) += 1.0;
  }
  return d;
}

Graph Graph::induced(std::span<const Index> nodes) const {
  std::vector<Index> position(static_cast<std::size_t>(n_), -1);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i] < 0 || nodes[i] >= n_) throw InvalidArgument("Graph::induced: node out of range");
    position[nodes[i]] = static_cast<Index>(i);
  }
  std::vector<Edge> sub;
  for (const Edge& e : edges_) {
    if (position[e.u] >= 0 && position[e.v] >= 0) sub.push_back({position[e.u], position[e.v]});
  }
  return Graph(static_cast<Index>(nodes.size()), std::move(sub), directed_);
}

bool Graph::connected() const {
  if (n_ == 0) return false;
  return connected_components(*this).size() == 1;
}

Graph graph_from_adjacency(const Eigen::MatrixXd& adjacency, bool directed) {
  std::vector<Edge> edges;
  const Index n = adjacency.rows();
  for (Index i = 0; i < n; ++i) {
    for (Index j = directed ? 0 : i + 1; j < n; ++j) {
      if (i != j && adjacency(i, j) != 0.0) edges.push_back({i, j});
    }
  }
  return Graph(n, std::move(edges), directed);
}

std::vector<std::vector<Index>> connected_components(const Graph& g) {
  // Weak connectivity: treat every edge as undirected.
  std::vector<std::vector<Index>> nb(static_cast<std::size_t>(g.n()));
  for (const Edge& e : g.edges()) {
    nb[e.u].push_back(e.v);
    nb[e.v].push_back(e.u);
  }
  std::vector<char> seen(static_cast<std::size_t>(g.n()), 0);
  std::vector<std::vector<Index>> components;
  for (Index s = 0; s < g.n(); ++s) {
    if (seen[s]) continue;
    std::vector<Index> members{s};
    seen[s] = 1;
    for (std::size_t head = 0; head < members.size(); ++head) {
      for (Index w : nb[members[head]]) {
        if (!seen[w]) {
          seen[w] = 1;
          members.push_back(w);
        }
      }
    }
    std::sort(members.begin(), members.end());
    components.push_back(std::move(members));
  }
  return components;
}

Component giant_component(const Graph& g) {
  if (g.n() < 1) throw InvalidArgument("giant_component: empty graph");
  const auto components = connected_components(g);
  std::size_t best = 0;
  for (std::size_t c = 1; c < components.size(); ++c) {
    if (components[c].size() > components[best].size()) best = c;
  }
  Component out;
  out.to_original = components[best];
  out.graph = g.induced(out.to_original);
  return out;
}

}  // namespace scorenet
