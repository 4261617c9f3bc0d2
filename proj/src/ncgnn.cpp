#include "ncwl/ncgnn.hpp"

#include <algorithm>
#include <numeric>

namespace ncwl::gnn {

namespace {

Graph sorted_by_color(const Graph &g, std::span<const ColorId> colors) {
  std::vector<NodeId> order(g.node_count());
  std::iota(order.begin(), order.end(), NodeId{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](NodeId x, NodeId y) { return colors[x] < colors[y]; });
  std::vector<NodeId> perm(g.node_count());
  for (NodeId pos = 0; pos < order.size(); ++pos) perm[order[pos]] = pos;
  return g.permuted(perm);
}

}  // namespace

std::pair<Graph, Graph> canonical_pair(const Graph &a, const Graph &b, LayerKind kind) {
  const auto [joint, offset] = disjoint_union(a, b);
  const auto seq = kind == LayerKind::nc ? refine_nc1wl(joint) : refine_1wl(joint);
  std::span<const ColorId> final_colors(seq.back().colors);
  return {sorted_by_color(a, final_colors.first(offset)),
          sorted_by_color(b, final_colors.subspan(offset))};
}

}  // namespace ncwl::gnn
