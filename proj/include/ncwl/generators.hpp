#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ncwl/graph.hpp"

namespace ncwl {

// Small named graphs used by the corpus, the property suites and the tests.

Graph empty_graph(std::size_t n);
Graph path_graph(std::size_t n);
Graph cycle_graph(std::size_t n);
Graph complete_graph(std::size_t n);
/// K_{1,leaves}; node 0 is the hub.
Graph star_graph(std::size_t leaves);
/// Hub 0 joined to the cycle 1..rim.
Graph wheel_graph(std::size_t rim);
Graph complete_bipartite_graph(std::size_t a, std::size_t b);

/// G(n, p) with labels drawn uniformly from [0, num_labels).
Graph random_gnp(std::size_t n, double p, std::mt19937_64 &rng,
                 std::uint32_t num_labels = 1);

/// Uniform random graph with exactly `m` edges.
Graph random_gnm(std::size_t n, std::size_t m, std::mt19937_64 &rng);

std::vector<NodeId> random_permutation(std::size_t n, std::mt19937_64 &rng);

}  // namespace ncwl
