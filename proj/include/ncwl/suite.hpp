#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ncwl/corpus.hpp"
#include "ncwl/graph.hpp"

namespace ncwl {

/// Independent PRNG stream for one named property, derived from the
/// master seed, so adding a property never shifts another's draws.
std::mt19937_64 stream_rng(std::uint64_t seed, std::string_view property);

/// Random graph pair on at most `max_nodes` nodes drawn from a mixture of
/// permuted copies, same-size G(n, m) pairs, unions of cycles (1-WL
/// equivalent by construction) and 2-labeled G(n, p) pairs.
std::pair<Graph, Graph> random_pair(std::mt19937_64 &rng, std::size_t max_nodes);

/// Random disjoint union of cycles covering exactly n >= 3 nodes.
Graph random_cycle_union(std::size_t n, std::mt19937_64 &rng);

struct SuiteCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Each corpus entry: recorded verdicts reproduced by compare() for every
/// method, and the oracle field confirmed when the pair is small enough.
std::vector<SuiteCheck> run_corpus_checks(const std::vector<CorpusEntry> &corpus);

struct HierarchyTally {
  std::size_t pairs = 0;
  std::size_t isomorphic_pairs = 0;
  std::size_t chain_violations = 0;   // 1wl => nc1wl => 3wl broken
  std::size_t false_distinctions = 0; // isomorphic pair distinguished
  std::size_t wl2_mismatches = 0;     // 2wl verdict != 1wl verdict
  std::size_t nc_over_1wl = 0;        // strictness witnesses found
  std::size_t wl3_over_nc = 0;
};

/// Runs all four methods plus the oracle on `pairs` random pairs.
HierarchyTally hierarchy_sweep(std::uint64_t seed, std::size_t pairs,
                               std::size_t max_nodes = 8);

struct SuiteOptions {
  std::uint64_t seed = 1;
  std::size_t random_pairs = 500;
  std::size_t max_nodes = 8;
};

/// Soundness on permuted copies, the hierarchy sweep, refinement
/// monotonicity and the #Message_NC identity, all seeded from `opts.seed`.
std::vector<SuiteCheck> run_random_checks(const SuiteOptions &opts);

}  // namespace ncwl
