#include "ncwl/generators.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace ncwl {

Graph empty_graph(std::size_t n) { return Graph(n, {}); }

Graph path_graph(std::size_t n) {
  std::vector<Edge> e;
  for (std::size_t i = 1; i < n; ++i)
    e.emplace_back(static_cast<NodeId>(i - 1), static_cast<NodeId>(i));
  return Graph(n, e);
}

Graph cycle_graph(std::size_t n) {
  if (n < 3) throw GraphError("a cycle needs at least 3 nodes");
  std::vector<Edge> e;
  for (std::size_t i = 0; i < n; ++i)
    e.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>((i + 1) % n));
  return Graph(n, e);
}

Graph complete_graph(std::size_t n) {
  std::vector<Edge> e;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) e.emplace_back(u, v);
  return Graph(n, e);
}

Graph star_graph(std::size_t leaves) {
  std::vector<Edge> e;
  for (NodeId v = 1; v <= leaves; ++v) e.emplace_back(0, v);
  return Graph(leaves + 1, e);
}

Graph wheel_graph(std::size_t rim) {
  if (rim < 3) throw GraphError("a wheel needs a rim of at least 3 nodes");
  std::vector<Edge> e;
  for (NodeId v = 1; v <= rim; ++v) {
    e.emplace_back(0, v);
    e.emplace_back(v, static_cast<NodeId>(v % rim + 1));
  }
  return Graph(rim + 1, e);
}

Graph complete_bipartite_graph(std::size_t a, std::size_t b) {
  std::vector<Edge> e;
  for (NodeId u = 0; u < a; ++u)
    for (std::size_t j = 0; j < b; ++j) e.emplace_back(u, static_cast<NodeId>(a + j));
  return Graph(a + b, e);
}

Graph random_gnp(std::size_t n, double p, std::mt19937_64 &rng,
                 std::uint32_t num_labels) {
  std::bernoulli_distribution coin(p);
  std::vector<Edge> e;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v)
      if (coin(rng)) e.emplace_back(u, v);
  std::vector<Label> labels(n, 0);
  if (num_labels > 1) {
    std::uniform_int_distribution<Label> pick(0, num_labels - 1);
    for (auto &l : labels) l = pick(rng);
  }
  return Graph(n, e, std::move(labels));
}

Graph random_gnm(std::size_t n, std::size_t m, std::mt19937_64 &rng) {
  const std::size_t pairs = n * (n - (n > 0 ? 1 : 0)) / 2;
  if (m > pairs) throw GraphError("too many edges requested");
  std::vector<Edge> e;
  e.reserve(m);
  if (2 * m > pairs) {
    std::vector<Edge> all;
    all.reserve(pairs);
    for (NodeId u = 0; u < n; ++u)
      for (NodeId v = u + 1; v < n; ++v) all.emplace_back(u, v);
    std::shuffle(all.begin(), all.end(), rng);
    e.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(m));
  } else {
    std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(n - 1));
    while (e.size() < m) {
      NodeId u = pick(rng), v = pick(rng);
      if (u == v) continue;
      e.emplace_back(std::min(u, v), std::max(u, v));
      if (e.size() == m) {
        std::sort(e.begin(), e.end());
        e.erase(std::unique(e.begin(), e.end()), e.end());
      }
    }
  }
  return Graph(n, e);
}

std::vector<NodeId> random_permutation(std::size_t n, std::mt19937_64 &rng) {
  std::vector<NodeId> p(n);
  std::iota(p.begin(), p.end(), NodeId{0});
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

}  // namespace ncwl
