#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ncwl {

using NodeId = std::uint32_t;
using Label = std::uint32_t;

/// Unordered edge stored with `first < second`.
using Edge = std::pair<NodeId, NodeId>;

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by parse_edge_list; `line()` is 1-based.
class ParseError : public GraphError {
 public:
  ParseError(std::size_t line, const std::string &what)
      : GraphError("line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Undirected simple labeled graph in compressed sparse row form.
///
/// Immutable after construction. Adjacency lists are strictly increasing,
/// so every neighbor query is a merge or a binary search. The canonical
/// edge order is ascending `(u, v)` with `u < v`; `edge_index` maps an
/// unordered edge into that order, which is also how per-edge feature rows
/// are addressed.
class Graph {
 public:
  Graph() = default;

  /// Builds from an edge list. Throws GraphError on a self-loop, a duplicate
  /// edge, an out-of-range endpoint or a label vector of the wrong size.
  /// An empty `labels` means every node carries label 0.
  Graph(std::size_t node_count, std::span<const Edge> edges,
        std::vector<Label> labels = {});

  std::size_t node_count() const noexcept { return labels_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  std::span<const NodeId> neighbors(NodeId v) const {
    return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
  }
  std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }

  /// Edges in canonical order.
  std::span<const Edge> edges() const noexcept { return edges_; }
  std::span<const Label> labels() const noexcept { return labels_; }
  Label label(NodeId v) const { return labels_[v]; }

  bool has_edge(NodeId u, NodeId v) const;

  /// Position of `{u, v}` in `edges()`, or -1 when absent.
  std::ptrdiff_t edge_index(NodeId u, NodeId v) const;

  /// Returns the graph with node `v` renamed to `perm[v]`.
  Graph permuted(std::span<const NodeId> perm) const;

  friend bool operator==(const Graph &a, const Graph &b) {
    return a.labels_ == b.labels_ && a.edges_ == b.edges_;
  }

 private:
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> adj_;
  // Edge id of each adjacency slot, parallel to adj_.
  std::vector<std::uint32_t> adj_edge_;
  std::vector<Edge> edges_;
  std::vector<Label> labels_;
};

/// One edge joining two neighbors of `center`; `u1 < u2`.
struct NeighborEdge {
  NodeId center;
  NodeId u1;
  NodeId u2;

  friend bool operator==(const NeighborEdge &, const NeighborEdge &) = default;
};

/// Edges among the neighbors of `v`, ascending by `(u1, u2)`.
std::vector<NeighborEdge> neighbor_edges(const Graph &g, NodeId v);

/// Calls `fn(u1, u2)` for each neighbor edge of `v` in ascending order
/// without allocating.
template <typename Fn>
void for_each_neighbor_edge(const Graph &g, NodeId v, Fn &&fn) {
  const auto nv = g.neighbors(v);
  for (std::size_t i = 0; i < nv.size(); ++i) {
    const NodeId u1 = nv[i];
    // Merge N(u1) against the tail of N(v) past u1.
    const auto nu = g.neighbors(u1);
    std::size_t a = i + 1, b = 0;
    while (a < nv.size() && b < nu.size()) {
      if (nv[a] < nu[b]) {
        ++a;
      } else if (nu[b] < nv[a]) {
        ++b;
      } else {
        fn(u1, nv[a]);
        ++a;
        ++b;
      }
    }
  }
}

/// Number of edges among the neighbors of `v` (#Message_NC).
std::size_t count_neighbor_edges(const Graph &g, NodeId v);

struct GraphStats {
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  std::size_t triangle_count = 0;
  std::vector<std::size_t> messages_nc_per_node;
  /// Average #Message_NC as the exact fraction sum / node_count.
  std::size_t messages_nc_sum = 0;
  double avg_messages_nc = 0.0;
  std::size_t max_messages_nc = 0;
  std::size_t max_degree = 0;
  /// min(m, 3T): extra representations an NC layer must hold.
  std::size_t memory_bound = 0;
};

GraphStats stats(const Graph &g);

/// Disjoint union; nodes of `b` are shifted by `a.node_count()`, which is
/// returned as the offset.
std::pair<Graph, std::size_t> disjoint_union(const Graph &a, const Graph &b);

/// Parses the edge-list text format. Throws ParseError.
Graph parse_edge_list(std::string_view text);

/// Serializes to the edge-list format. Emits a `labels` section only when a
/// label is nonzero.
std::string to_edge_list(const Graph &g);

Graph read_edge_list_file(const std::string &path);

}  // namespace ncwl
