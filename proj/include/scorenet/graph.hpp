#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

namespace scorenet {

using Index = Eigen::Index;

struct Edge {
  Index u;
  Index v;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Unweighted graph on nodes 0..n-1 without self-loops.
///
/// Undirected edges are stored once with u < v. Edges are kept sorted and
/// unique; the dense adjacency is built on demand.
class Graph {
 public:
  Graph() = default;

  /// Self-loops are dropped and duplicates merged. Throws InvalidArgument if an
  /// endpoint is outside [0, n).
  Graph(Index n, std::vector<Edge> edges, bool directed = false);

  Index n() const noexcept { return n_; }
  bool directed() const noexcept { return directed_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  /// Dense 0/1 adjacency. Symmetric when undirected; zero diagonal.
  Eigen::MatrixXd adjacency() const;

  /// Out-neighbours (all neighbours when undirected), sorted ascending.
  std::vector<std::vector<Index>> neighbors() const;

  /// Degrees (out-degrees when directed).
  Eigen::VectorXd degrees() const;

  /// Subgraph induced by `nodes`; node i of the result is nodes[i].
  Graph induced(std::span<const Index> nodes) const;

  bool connected() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  Index n_ = 0;
  bool directed_ = false;
  std::vector<Edge> edges_;
};

/// Build an undirected graph from the upper triangle of a 0/1 matrix.
Graph graph_from_adjacency(const Eigen::MatrixXd& adjacency, bool directed = false);

struct Component {
  Graph graph;
  std::vector<Index> to_original;  ///< new id -> original id
};

/// Connected components (weak components for directed graphs), ordered by
/// their smallest original node id. Each list is sorted.
std::vector<std::vector<Index>> connected_components(const Graph& g);

/// Largest connected component. Ties go to the component containing the
/// smallest original index.
Component giant_component(const Graph& g);

}  // namespace scorenet
