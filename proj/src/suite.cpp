#include "ncwl/suite.hpp"

#include <algorithm>
#include <sstream>

#include "ncwl/generators.hpp"
#include "ncwl/wl.hpp"

namespace ncwl {

std::mt19937_64 stream_rng(std::uint64_t seed, std::string_view property) {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (unsigned char c : property) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
  return std::mt19937_64(seq);
}

Graph random_cycle_union(std::size_t n, std::mt19937_64 &rng) {
  if (n < 3) throw GraphError("a cycle union needs at least 3 nodes");
  std::vector<std::size_t> parts;
  std::size_t left = n;
  while (left > 0) {
    std::uniform_int_distribution<std::size_t> len(3, left);
    auto l = len(rng);
    // A remainder of 1 or 2 nodes cannot close a cycle.
    if (left - l == 1 || left - l == 2) continue;
    parts.push_back(l);
    left -= l;
  }
  const auto perm = random_permutation(n, rng);
  std::vector<Edge> e;
  NodeId base = 0;
  for (auto len : parts) {
    for (std::size_t i = 0; i < len; ++i)
      e.emplace_back(perm[base + i], perm[base + (i + 1) % len]);
    base += static_cast<NodeId>(len);
  }
  return Graph(n, e);
}

std::pair<Graph, Graph> random_pair(std::mt19937_64 &rng, std::size_t max_nodes) {
  std::uniform_int_distribution<int> kind_dist(0, 3);
  const int kind = kind_dist(rng);
  // Tiny graphs are almost always isomorphic or trivially apart, so only
  // the permuted-copy kind goes below four nodes.
  const std::size_t lo = kind == 0 ? 1 : std::min<std::size_t>(4, std::max<std::size_t>(3, max_nodes));
  std::uniform_int_distribution<std::size_t> n_dist(lo, std::max(lo, max_nodes));
  const auto n = n_dist(rng);
  switch (kind) {
    case 0: {
      std::uniform_real_distribution<double> p(0.1, 0.9);
      auto g = random_gnp(n, p(rng), rng, 2);
      auto h = g.permuted(random_permutation(n, rng));
      return {std::move(g), std::move(h)};
    }
    case 1: {
      std::uniform_int_distribution<std::size_t> m(0, n * (n - 1) / 2);
      const auto edges = m(rng);
      return {random_gnm(n, edges, rng), random_gnm(n, edges, rng)};
    }
    case 2:
      return {random_cycle_union(n, rng), random_cycle_union(n, rng)};
    default: {
      std::uniform_real_distribution<double> p(0.2, 0.8);
      const double q = p(rng);
      return {random_gnp(n, q, rng, 2), random_gnp(n, q, rng, 2)};
    }
  }
}

std::vector<SuiteCheck> run_corpus_checks(const std::vector<CorpusEntry> &corpus) {
  std::vector<SuiteCheck> out;
  for (const auto &e : corpus) {
    SuiteCheck c{"corpus/" + e.name, true, ""};
    std::ostringstream why;
    for (auto [m, want] : e.expected) {
      const auto got = compare(e.g1, e.g2, m).verdict;
      if (got != want) {
        c.passed = false;
        why << method_name(m) << " expected "
            << (want == Verdict::distinguished ? "d" : "n") << " got "
            << (got == Verdict::distinguished ? "d" : "n") << "; ";
      }
    }
    if (e.oracle_isomorphic) {
      if (e.g1.node_count() > 10 || e.g2.node_count() > 10) {
        c.passed = false;
        why << "oracle field set on a pair above the 10-node cap; ";
      } else if (brute_force_isomorphic(e.g1, e.g2) != *e.oracle_isomorphic) {
        c.passed = false;
        why << "oracle disagrees with iso field; ";
      }
    }
    c.detail = why.str();
    out.push_back(std::move(c));
  }
  return out;
}

HierarchyTally hierarchy_sweep(std::uint64_t seed, std::size_t pairs, std::size_t max_nodes) {
  auto rng = stream_rng(seed, "hierarchy");
  HierarchyTally t;
  for (std::size_t i = 0; i < pairs; ++i) {
    const auto [a, b] = random_pair(rng, max_nodes);
    const bool d1 = compare(a, b, Method::wl1).distinguished();
    const bool dnc = compare(a, b, Method::nc1wl).distinguished();
    const bool d2 = compare(a, b, Method::wl2).distinguished();
    const bool d3 = compare(a, b, Method::wl3).distinguished();
    const bool iso = brute_force_isomorphic(a, b);
    ++t.pairs;
    if (iso) ++t.isomorphic_pairs;
    if ((d1 && !dnc) || (dnc && !d3)) ++t.chain_violations;
    if (iso && (d1 || dnc || d2 || d3)) ++t.false_distinctions;
    if (d1 != d2) ++t.wl2_mismatches;
    if (dnc && !d1) ++t.nc_over_1wl;
    if (d3 && !dnc) ++t.wl3_over_nc;
  }
  return t;
}

std::vector<SuiteCheck> run_random_checks(const SuiteOptions &opts) {
  std::vector<SuiteCheck> out;

  {
    auto rng = stream_rng(opts.seed, "soundness");
    std::size_t bad = 0;
    for (std::size_t i = 0; i < opts.random_pairs; ++i) {
      std::uniform_int_distribution<std::size_t> n_dist(1, std::max<std::size_t>(1, opts.max_nodes));
      std::uniform_real_distribution<double> p(0.1, 0.9);
      const auto n = n_dist(rng);
      const auto g = random_gnp(n, p(rng), rng, 2);
      const auto h = g.permuted(random_permutation(n, rng));
      for (auto m : {Method::wl1, Method::nc1wl, Method::wl2, Method::wl3})
        if (compare(g, h, m).distinguished()) ++bad;
    }
    out.push_back({"soundness", bad == 0,
                   std::to_string(opts.random_pairs) + " permuted pairs, " +
                       std::to_string(bad) + " false distinctions"});
  }

  {
    const auto t = hierarchy_sweep(opts.seed, opts.random_pairs, opts.max_nodes);
    std::ostringstream d;
    d << t.pairs << " pairs (" << t.isomorphic_pairs << " isomorphic): "
      << t.chain_violations << " chain violations, " << t.false_distinctions
      << " false distinctions, " << t.wl2_mismatches << " 2wl/1wl mismatches; witnesses "
      << t.nc_over_1wl << " nc>1wl, " << t.wl3_over_nc << " 3wl>nc";
    out.push_back({"hierarchy", t.chain_violations == 0 && t.false_distinctions == 0 &&
                                    t.wl2_mismatches == 0,
                   d.str()});
  }

  {
    auto rng = stream_rng(opts.seed, "monotonicity");
    std::size_t bad = 0, runs = 0;
    for (std::size_t i = 0; i < std::max<std::size_t>(1, opts.random_pairs / 5); ++i) {
      std::uniform_int_distribution<std::size_t> n_dist(1, 12);
      std::uniform_real_distribution<double> p(0.1, 0.6);
      const auto g = random_gnp(n_dist(rng), p(rng), rng, 2);
      for (const auto &seq : {refine_1wl(g), refine_nc1wl(g)}) {
        ++runs;
        for (std::size_t k = 1; k < seq.size(); ++k)
          if (!refines(seq[k].colors, seq[k - 1].colors) ||
              seq[k].num_classes < seq[k - 1].num_classes) {
            ++bad;
            break;
          }
      }
    }
    out.push_back({"monotonicity", bad == 0,
                   std::to_string(runs) + " refinement runs, " + std::to_string(bad) + " violations"});
  }

  {
    auto rng = stream_rng(opts.seed, "message-nc-identity");
    std::size_t bad = 0;
    constexpr std::size_t graphs = 100;
    for (std::size_t i = 0; i < graphs; ++i) {
      std::uniform_int_distribution<std::size_t> n_dist(0, 40);
      std::uniform_real_distribution<double> p(0.0, 0.7);
      const auto s = stats(random_gnp(n_dist(rng), p(rng), rng));
      if (s.messages_nc_sum != 3 * s.triangle_count ||
          s.memory_bound != std::min(s.edge_count, 3 * s.triangle_count))
        ++bad;
    }
    out.push_back({"message-nc-identity", bad == 0,
                   std::to_string(graphs) + " graphs, " + std::to_string(bad) + " mismatches"});
  }
  return out;
}

}  // namespace ncwl
