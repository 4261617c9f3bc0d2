#include "ncwl/wl.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <stdexcept>
#include <thread>

namespace ncwl {

std::string_view method_name(Method m) {
  switch (m) {
    case Method::wl1: return "1wl";
    case Method::nc1wl: return "nc1wl";
    case Method::wl2: return "2wl";
    case Method::wl3: return "3wl";
  }
  return "?";
}

std::optional<Method> parse_method(std::string_view s) {
  for (auto m : {Method::wl1, Method::nc1wl, Method::wl2, Method::wl3})
    if (method_name(m) == s) return m;
  return std::nullopt;
}

Histogram histogram_of(std::span<const ColorId> colors) {
  std::map<ColorId, std::size_t> counts;
  for (auto c : colors) ++counts[c];
  return {counts.begin(), counts.end()};
}

Coloring Coloring::from_colors(std::vector<ColorId> colors) {
  Coloring c;
  c.histogram = histogram_of(colors);
  c.num_classes = c.histogram.size();
  c.colors = std::move(colors);
  return c;
}

bool refines(std::span<const ColorId> fine, std::span<const ColorId> coarse) {
  if (fine.size() != coarse.size()) return false;
  std::unordered_map<ColorId, ColorId> parent;
  for (std::size_t i = 0; i < fine.size(); ++i) {
    auto [it, fresh] = parent.emplace(fine[i], coarse[i]);
    if (!fresh && it->second != coarse[i]) return false;
  }
  return true;
}

bool same_partition(std::span<const ColorId> a, std::span<const ColorId> b) {
  return refines(a, b) && refines(b, a);
}

ColorId SignatureInterner::intern(const std::string &signature) {
  auto [it, fresh] =
      table_.try_emplace(signature, static_cast<ColorId>(table_.size()));
  return it->second;
}

bool parallel_enabled() {
  const char *v = std::getenv("WL_NO_PARALLEL");
  return !(v && std::string_view(v) == "1");
}

namespace {

/// One entity universe in a (possibly joint) refinement run. Signatures
/// only read colors of the same universe, indexed locally.
struct Universe {
  std::size_t size = 0;
  std::function<void(std::size_t, std::string &)> initial;
  std::function<void(std::size_t, std::span<const ColorId>, std::string &)>
      refine;
};

struct JointColoring {
  std::vector<ColorId> colors;
  std::size_t num_classes = 0;
};

constexpr std::size_t kParallelThreshold = 4096;

/// Computes every entity's signature, possibly on worker threads, then
/// interns them sequentially in universe/entity order so the resulting ids
/// never depend on scheduling.
template <typename SigFn>
JointColoring intern_all(std::span<const Universe> universes, SigFn &&sig) {
  std::size_t total = 0;
  for (const auto &u : universes) total += u.size;
  std::vector<std::string> sigs(total);

  std::size_t workers = 1;
  if (total >= kParallelThreshold && parallel_enabled())
    workers = std::max(1u, std::thread::hardware_concurrency());

  std::size_t base = 0;
  for (std::size_t ui = 0; ui < universes.size(); ++ui) {
    const auto n = universes[ui].size;
    auto job = [&, ui, base](std::size_t lo, std::size_t hi) {
      for (std::size_t e = lo; e < hi; ++e) sig(ui, e, sigs[base + e]);
    };
    if (workers <= 1 || n < kParallelThreshold) {
      job(0, n);
    } else {
      std::vector<std::jthread> pool;
      const auto chunk = (n + workers - 1) / workers;
      for (std::size_t lo = 0; lo < n; lo += chunk)
        pool.emplace_back(job, lo, std::min(n, lo + chunk));
    }
    base += n;
  }

  SignatureInterner interner;
  JointColoring out;
  out.colors.resize(total);
  for (std::size_t i = 0; i < total; ++i) out.colors[i] = interner.intern(sigs[i]);
  out.num_classes = interner.size();
  return out;
}

JointColoring initial_coloring(std::span<const Universe> us) {
  return intern_all(us, [&](std::size_t ui, std::size_t e, std::string &buf) {
    us[ui].initial(e, buf);
  });
}

JointColoring refine_step(std::span<const Universe> us, const JointColoring &prev) {
  std::vector<std::size_t> offset(us.size(), 0);
  for (std::size_t i = 1; i < us.size(); ++i) offset[i] = offset[i - 1] + us[i - 1].size;
  return intern_all(us, [&](std::size_t ui, std::size_t e, std::string &buf) {
    std::span<const ColorId> local(prev.colors.data() + offset[ui], us[ui].size);
    us[ui].refine(e, local, buf);
  });
}

// Node signatures. Scratch vectors are thread-local so worker threads do
// not allocate per node.

void node_initial(const Graph &g, std::size_t v, std::string &buf) {
  append_word(buf, g.label(static_cast<NodeId>(v)));
}

void wl1_signature(const Graph &g, std::size_t v, std::span<const ColorId> c,
                   std::string &buf) {
  thread_local std::vector<ColorId> nb;
  nb.clear();
  for (auto u : g.neighbors(static_cast<NodeId>(v))) nb.push_back(c[u]);
  std::sort(nb.begin(), nb.end());
  buf.reserve(4 * (2 + nb.size()));
  append_word(buf, c[v]);
  append_word(buf, static_cast<std::uint32_t>(nb.size()));
  for (auto x : nb) append_word(buf, x);
}

void nc1wl_signature(const Graph &g, std::size_t v, std::span<const ColorId> c,
                     std::string &buf) {
  wl1_signature(g, v, c, buf);
  thread_local std::vector<std::pair<ColorId, ColorId>> pairs;
  pairs.clear();
  for_each_neighbor_edge(g, static_cast<NodeId>(v), [&](NodeId a, NodeId b) {
    pairs.emplace_back(std::min(c[a], c[b]), std::max(c[a], c[b]));
  });
  std::sort(pairs.begin(), pairs.end());
  append_word(buf, static_cast<std::uint32_t>(pairs.size()));
  for (auto [x, y] : pairs) {
    append_word(buf, x);
    append_word(buf, y);
  }
}

Universe node_universe(const Graph &g, bool neighbor_communication) {
  Universe u;
  u.size = g.node_count();
  u.initial = [&g](std::size_t v, std::string &buf) { node_initial(g, v, buf); };
  if (neighbor_communication)
    u.refine = [&g](std::size_t v, std::span<const ColorId> c, std::string &buf) {
      nc1wl_signature(g, v, c, buf);
    };
  else
    u.refine = [&g](std::size_t v, std::span<const ColorId> c, std::string &buf) {
      wl1_signature(g, v, c, buf);
    };
  return u;
}

std::size_t ipow(std::size_t b, int e) {
  std::size_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

void check_kwl(const Graph &g, int k, KwlOptions opts) {
  if (k != 2 && k != 3)
    throw std::invalid_argument("k-WL supports k = 2 or 3, got " + std::to_string(k));
  const std::size_t cap = opts.max_nodes ? opts.max_nodes : (k == 3 ? 32 : 256);
  if (g.node_count() > cap)
    throw GraphError(std::to_string(k) + "-WL node cap exceeded: " +
                     std::to_string(g.node_count()) + " > " + std::to_string(cap));
}

Universe tuple_universe(const Graph &g, int k) {
  const std::size_t n = g.node_count();
  Universe u;
  u.size = ipow(n, k);
  // Atomic type: labels per position, then for each position pair i < j
  // whether the nodes coincide and whether they are adjacent.
  u.initial = [&g, n, k](std::size_t t, std::string &buf) {
    NodeId v[3];
    for (int i = k - 1; i >= 0; --i) {
      v[i] = static_cast<NodeId>(t % n);
      t /= n;
    }
    for (int i = 0; i < k; ++i) append_word(buf, g.label(v[i]));
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j)
        append_word(buf, (v[i] == v[j] ? 1u : 0u) | (g.has_edge(v[i], v[j]) ? 2u : 0u));
  };
  u.refine = [n, k](std::size_t t, std::span<const ColorId> c, std::string &buf) {
    thread_local std::vector<ColorId> ms;
    buf.reserve(4 * (1 + k * n));
    append_word(buf, c[t]);
    for (int i = 0; i < k; ++i) {
      // Replacing position i walks the tuple index with stride n^{k-1-i}.
      const std::size_t stride = ipow(n, k - 1 - i);
      const std::size_t digit = (t / stride) % n;
      const std::size_t base = t - digit * stride;
      ms.resize(n);
      for (std::size_t s = 0; s < n; ++s) ms[s] = c[base + s * stride];
      std::sort(ms.begin(), ms.end());
      for (auto x : ms) append_word(buf, x);
    }
  };
  return u;
}

std::vector<Coloring> run_single(std::span<const Universe> us) {
  std::vector<Coloring> seq;
  auto cur = initial_coloring(us);
  const std::size_t entities = cur.colors.size();
  seq.push_back(Coloring::from_colors(cur.colors));
  // A partition of `entities` items can be split at most entities - 1 times.
  for (std::size_t round = 0; round <= entities; ++round) {
    auto next = refine_step(us, cur);
    // The signature embeds the previous color, so the new partition always
    // refines the old one; equal class counts mean equal partitions.
    const bool stable = next.num_classes == cur.num_classes;
    seq.push_back(Coloring::from_colors(next.colors));
    cur = std::move(next);
    if (stable) break;
  }
  return seq;
}

}  // namespace

std::vector<Coloring> refine_1wl(const Graph &g) {
  const Universe u[] = {node_universe(g, false)};
  return run_single(u);
}

std::vector<Coloring> refine_nc1wl(const Graph &g) {
  const Universe u[] = {node_universe(g, true)};
  return run_single(u);
}

std::vector<Coloring> refine_kwl(const Graph &g, int k, KwlOptions opts) {
  check_kwl(g, k, opts);
  const Universe u[] = {tuple_universe(g, k)};
  return run_single(u);
}

RefinementReport compare(const Graph &a, const Graph &b, Method method,
                         CompareOptions opts) {
  RefinementReport rep;
  rep.method = method;

  // Both graphs live in one coloring array: the disjoint union for node
  // methods, two tuple universes back to back for k-WL.
  std::optional<Graph> joint;
  std::vector<Universe> us;
  std::size_t split = 0;
  switch (method) {
    case Method::wl1:
    case Method::nc1wl: {
      auto [u, off] = disjoint_union(a, b);
      joint = std::move(u);
      us.push_back(node_universe(*joint, method == Method::nc1wl));
      split = off;
      break;
    }
    case Method::wl2:
    case Method::wl3: {
      const int k = method == Method::wl2 ? 2 : 3;
      check_kwl(a, k, opts.kwl);
      check_kwl(b, k, opts.kwl);
      if (a.node_count() != b.node_count()) {
        // Tuple universes of different sizes: the iteration-0 histograms
        // already differ in cardinality.
        rep.verdict = Verdict::distinguished;
        rep.distinguishing_iteration = 0;
        rep.histograms.emplace_back(Histogram{{0, ipow(a.node_count(), k)}},
                                    Histogram{{0, ipow(b.node_count(), k)}});
        return rep;
      }
      us.push_back(tuple_universe(a, k));
      us.push_back(tuple_universe(b, k));
      split = us[0].size;
      break;
    }
  }

  auto cur = initial_coloring(us);
  const std::size_t entities = cur.colors.size();
  for (std::size_t iter = 0;; ++iter) {
    std::span<const ColorId> all(cur.colors);
    auto ha = histogram_of(all.first(split));
    auto hb = histogram_of(all.subspan(split));
    const bool differ = ha != hb;
    rep.histograms.emplace_back(std::move(ha), std::move(hb));
    if (differ) {
      rep.verdict = Verdict::distinguished;
      rep.distinguishing_iteration = iter;
      rep.iterations_run = iter;
      return rep;
    }
    if (iter > entities) break;
    auto next = refine_step(us, cur);
    const bool stable = next.num_classes == cur.num_classes;
    cur = std::move(next);
    rep.iterations_run = iter + 1;
    if (stable) break;
  }
  rep.verdict = Verdict::not_distinguished;
  return rep;
}

bool brute_force_isomorphic(const Graph &a, const Graph &b, std::size_t max_nodes) {
  if (a.node_count() > max_nodes || b.node_count() > max_nodes)
    throw GraphError("brute-force isomorphism capped at " + std::to_string(max_nodes) +
                     " nodes");
  const std::size_t n = a.node_count();
  if (n != b.node_count() || a.edge_count() != b.edge_count()) return false;

  auto invariant = [](const Graph &g) {
    std::vector<std::pair<Label, std::size_t>> d;
    for (NodeId v = 0; v < g.node_count(); ++v) d.emplace_back(g.label(v), g.degree(v));
    std::sort(d.begin(), d.end());
    return d;
  };
  if (invariant(a) != invariant(b)) return false;

  // Map nodes of `a` in descending degree order so adjacency constraints
  // bite early.
  std::vector<NodeId> order(n);
  for (NodeId v = 0; v < n; ++v) order[v] = v;
  std::stable_sort(order.begin(), order.end(), [&](NodeId x, NodeId y) {
    return a.degree(x) > a.degree(y);
  });

  std::vector<NodeId> map(n, 0);
  std::vector<bool> used(n, false);
  std::function<bool(std::size_t)> extend = [&](std::size_t depth) -> bool {
    if (depth == n) return true;
    const NodeId v = order[depth];
    for (NodeId p = 0; p < n; ++p) {
      if (used[p] || a.label(v) != b.label(p) || a.degree(v) != b.degree(p)) continue;
      bool ok = true;
      for (std::size_t i = 0; i < depth && ok; ++i) {
        const NodeId w = order[i];
        ok = a.has_edge(v, w) == b.has_edge(p, map[w]);
      }
      if (!ok) continue;
      used[p] = true;
      map[v] = p;
      if (extend(depth + 1)) return true;
      used[p] = false;
    }
    return false;
  };
  return extend(0);
}

}  // namespace ncwl
