#include "ncwl/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>

namespace ncwl {

Graph::Graph(std::size_t node_count, std::span<const Edge> edges,
             std::vector<Label> labels)
    : labels_(std::move(labels)) {
  if (labels_.empty()) {
    labels_.assign(node_count, 0);
  } else if (labels_.size() != node_count) {
    throw GraphError("label count " + std::to_string(labels_.size()) +
                     " does not match node count " +
                     std::to_string(node_count));
  }

  edges_.reserve(edges.size());
  for (auto [u, v] : edges) {
    if (u >= node_count || v >= node_count)
      throw GraphError("edge (" + std::to_string(u) + "," + std::to_string(v) +
                       ") references a node outside [0," +
                       std::to_string(node_count) + ")");
    if (u == v) throw GraphError("self-loop at node " + std::to_string(u));
    edges_.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(edges_.begin(), edges_.end());
  if (auto it = std::adjacent_find(edges_.begin(), edges_.end());
      it != edges_.end())
    throw GraphError("duplicate edge (" + std::to_string(it->first) + "," +
                     std::to_string(it->second) + ")");

  std::vector<std::size_t> deg(node_count, 0);
  for (auto [u, v] : edges_) {
    ++deg[u];
    ++deg[v];
  }
  offsets_.assign(node_count + 1, 0);
  for (std::size_t v = 0; v < node_count; ++v)
    offsets_[v + 1] = offsets_[v] + deg[v];
  adj_.resize(offsets_.back());
  adj_edge_.resize(offsets_.back());
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  // Edges are sorted by (first, second), so every node receives its lower
  // neighbors first, then its upper ones, each ascending.
  for (std::uint32_t e = 0; e < edges_.size(); ++e) {
    auto [u, v] = edges_[e];
    adj_[fill[u]] = v;
    adj_edge_[fill[u]++] = e;
    adj_[fill[v]] = u;
    adj_edge_[fill[v]++] = e;
  }
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  return edge_index(u, v) >= 0;
}

std::ptrdiff_t Graph::edge_index(NodeId u, NodeId v) const {
  if (u >= node_count() || v >= node_count() || u == v) return -1;
  if (degree(u) > degree(v)) std::swap(u, v);
  const auto nu = neighbors(u);
  auto it = std::lower_bound(nu.begin(), nu.end(), v);
  if (it == nu.end() || *it != v) return -1;
  return adj_edge_[offsets_[u] + static_cast<std::size_t>(it - nu.begin())];
}

Graph Graph::permuted(std::span<const NodeId> perm) const {
  if (perm.size() != node_count())
    throw GraphError("permutation size does not match node count");
  std::vector<bool> seen(node_count(), false);
  for (auto p : perm) {
    if (p >= node_count() || seen[p]) throw GraphError("not a permutation");
    seen[p] = true;
  }
  std::vector<Edge> e;
  e.reserve(edges_.size());
  for (auto [u, v] : edges_) e.emplace_back(perm[u], perm[v]);
  std::vector<Label> l(node_count());
  for (std::size_t v = 0; v < node_count(); ++v) l[perm[v]] = labels_[v];
  return Graph(node_count(), e, std::move(l));
}

std::vector<NeighborEdge> neighbor_edges(const Graph &g, NodeId v) {
  if (v >= g.node_count())
    throw GraphError("node " + std::to_string(v) + " out of range");
  std::vector<NeighborEdge> out;
  for_each_neighbor_edge(g, v, [&](NodeId a, NodeId b) {
    out.push_back({v, a, b});
  });
  return out;
}

std::size_t count_neighbor_edges(const Graph &g, NodeId v) {
  if (v >= g.node_count())
    throw GraphError("node " + std::to_string(v) + " out of range");
  std::size_t n = 0;
  for_each_neighbor_edge(g, v, [&](NodeId, NodeId) { ++n; });
  return n;
}

GraphStats stats(const Graph &g) {
  GraphStats s;
  s.node_count = g.node_count();
  s.edge_count = g.edge_count();
  s.messages_nc_per_node.resize(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const auto c = count_neighbor_edges(g, v);
    s.messages_nc_per_node[v] = c;
    s.messages_nc_sum += c;
    s.max_messages_nc = std::max(s.max_messages_nc, c);
    s.max_degree = std::max(s.max_degree, g.degree(v));
  }
  // Count each triangle once at its smallest corner: both other corners
  // are larger neighbors joined by an edge.
  for (NodeId v = 0; v < g.node_count(); ++v) {
    for_each_neighbor_edge(g, v, [&](NodeId a, NodeId) {
      if (a > v) ++s.triangle_count;
    });
  }
  if (s.node_count > 0)
    s.avg_messages_nc = static_cast<double>(s.messages_nc_sum) /
                        static_cast<double>(s.node_count);
  s.memory_bound = std::min(s.edge_count, 3 * s.triangle_count);
  return s;
}

std::pair<Graph, std::size_t> disjoint_union(const Graph &a, const Graph &b) {
  const auto off = a.node_count();
  std::vector<Edge> e(a.edges().begin(), a.edges().end());
  for (auto [u, v] : b.edges())
    e.emplace_back(static_cast<NodeId>(u + off), static_cast<NodeId>(v + off));
  std::vector<Label> l(a.labels().begin(), a.labels().end());
  l.insert(l.end(), b.labels().begin(), b.labels().end());
  return {Graph(off + b.node_count(), e, std::move(l)), off};
}

namespace {

struct Line {
  std::size_t number;
  std::string_view text;
};

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    auto j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::optional<std::uint64_t> to_u64(std::string_view s) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

std::pair<std::uint64_t, std::uint64_t> two_ints(const Line &ln,
                                                 const char *what) {
  auto tok = split_ws(ln.text);
  if (tok.size() != 2)
    throw ParseError(ln.number, std::string("expected ") + what);
  auto a = to_u64(tok[0]), b = to_u64(tok[1]);
  if (!a || !b)
    throw ParseError(ln.number, std::string("expected ") + what);
  return {*a, *b};
}

}  // namespace

Graph parse_edge_list(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0, pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    auto s = text.substr(pos, nl - pos);
    ++number;
    pos = nl + 1;
    if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
    if (!s.empty() && s.front() == '#') continue;
    if (split_ws(s).empty()) continue;
    lines.push_back({number, s});
  }
  if (lines.empty()) throw ParseError(1, "missing header '<node_count> <edge_count>'");

  auto [n, m] = two_ints(lines[0], "header '<node_count> <edge_count>'");
  if (n > 0xFFFFFFFFull) throw ParseError(lines[0].number, "node count too large");
  if (lines.size() < 1 + m)
    throw ParseError(lines.back().number,
                     "expected " + std::to_string(m) + " edge lines, found " +
                         std::to_string(lines.size() - 1));

  std::vector<Edge> edges;
  edges.reserve(m);
  for (std::size_t i = 1; i <= m; ++i) {
    const auto &ln = lines[i];
    auto [u, v] = two_ints(ln, "edge '<u> <v>'");
    if (u >= n || v >= n)
      throw ParseError(ln.number, "node id " + std::to_string(std::max(u, v)) +
                                      " >= node count " + std::to_string(n));
    if (u == v) throw ParseError(ln.number, "self-loop at node " + std::to_string(u));
    edges.emplace_back(static_cast<NodeId>(std::min(u, v)),
                       static_cast<NodeId>(std::max(u, v)));
  }
  // Duplicate detection reports the later of the two lines.
  {
    std::vector<std::pair<Edge, std::size_t>> order;
    order.reserve(m);
    for (std::size_t i = 0; i < m; ++i) order.emplace_back(edges[i], lines[i + 1].number);
    std::sort(order.begin(), order.end());
    std::optional<std::size_t> bad;
    for (std::size_t i = 1; i < order.size(); ++i)
      if (order[i].first == order[i - 1].first)
        bad = std::min(bad.value_or(order[i].second), order[i].second);
    if (bad) throw ParseError(*bad, "duplicate edge");
  }

  std::vector<Label> labels;
  std::size_t i = 1 + m;
  if (i < lines.size()) {
    auto tok = split_ws(lines[i].text);
    if (tok.size() != 1 || tok[0] != "labels")
      throw ParseError(lines[i].number, "unexpected content after edge list");
    const auto header = lines[i].number;
    ++i;
    labels.assign(n, 0);
    std::vector<bool> set(n, false);
    for (; i < lines.size(); ++i) {
      auto [v, l] = two_ints(lines[i], "label '<v> <label_id>'");
      if (v >= n)
        throw ParseError(lines[i].number, "node id " + std::to_string(v) +
                                              " >= node count " + std::to_string(n));
      if (set[v]) throw ParseError(lines[i].number, "duplicate label for node " + std::to_string(v));
      if (l > 0xFFFFFFFFull) throw ParseError(lines[i].number, "label id too large");
      set[v] = true;
      labels[v] = static_cast<Label>(l);
    }
    if (std::find(set.begin(), set.end(), false) != set.end())
      throw ParseError(header, "labels section must list every node exactly once");
  }
  return Graph(n, edges, std::move(labels));
}

std::string to_edge_list(const Graph &g) {
  std::ostringstream os;
  os << g.node_count() << ' ' << g.edge_count() << '\n';
  for (auto [u, v] : g.edges()) os << u << ' ' << v << '\n';
  const auto l = g.labels();
  if (std::any_of(l.begin(), l.end(), [](Label x) { return x != 0; })) {
    os << "labels\n";
    for (std::size_t v = 0; v < l.size(); ++v) os << v << ' ' << l[v] << '\n';
  }
  return os.str();
}

Graph read_edge_list_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw GraphError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_edge_list(ss.str());
}

}  // namespace ncwl
