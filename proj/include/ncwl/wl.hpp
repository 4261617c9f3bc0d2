#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ncwl/graph.hpp"

namespace ncwl {

using ColorId = std::uint32_t;

enum class Method { wl1, nc1wl, wl2, wl3 };

std::string_view method_name(Method m);
std::optional<Method> parse_method(std::string_view s);

/// (color, count) pairs sorted by color id.
using Histogram = std::vector<std::pair<ColorId, std::size_t>>;

/// Dense coloring of a set of entities (nodes, or k-tuples in row-major
/// order). Color ids cover exactly [0, num_classes).
struct Coloring {
  std::vector<ColorId> colors;
  std::size_t num_classes = 0;
  Histogram histogram;

  static Coloring from_colors(std::vector<ColorId> colors);
};

/// True when both colorings induce the same partition of the entities,
/// regardless of how the classes are numbered.
bool same_partition(std::span<const ColorId> a, std::span<const ColorId> b);

/// True when every class of `fine` lies inside one class of `coarse`.
bool refines(std::span<const ColorId> fine, std::span<const ColorId> coarse);

/// Histogram of `colors[begin, end)`.
Histogram histogram_of(std::span<const ColorId> colors);

/// Injective map from canonical signature byte strings to dense ids,
/// assigned in first-seen order.
class SignatureInterner {
 public:
  ColorId intern(const std::string &signature);
  std::size_t size() const noexcept { return table_.size(); }

 private:
  std::unordered_map<std::string, ColorId> table_;
};

/// Appends fixed-width little-endian words so signatures compare bytewise.
inline void append_word(std::string &buf, std::uint32_t w) {
  const char b[4] = {static_cast<char>(w & 0xFF), static_cast<char>((w >> 8) & 0xFF),
                     static_cast<char>((w >> 16) & 0xFF),
                     static_cast<char>((w >> 24) & 0xFF)};
  buf.append(b, 4);
}

/// 1-WL. Returns the initial coloring followed by one coloring per round;
/// the last entry is the first one whose partition equals its predecessor's.
std::vector<Coloring> refine_1wl(const Graph &g);

/// NC-1-WL: 1-WL whose signature also carries the multiset of color pairs
/// of edges joining two neighbors.
std::vector<Coloring> refine_nc1wl(const Graph &g);

struct KwlOptions {
  /// Largest node count accepted; 0 picks the default for k
  /// (32 for k = 3, 256 for k = 2).
  std::size_t max_nodes = 0;
};

/// k-WL over V^k, k in {2, 3}. Tuple (v_1, ..., v_k) has index
/// v_1 n^{k-1} + ... + v_k. Throws std::invalid_argument for other k and
/// GraphError when the node cap is exceeded.
std::vector<Coloring> refine_kwl(const Graph &g, int k, KwlOptions opts = {});

enum class Verdict { not_distinguished, distinguished };

struct RefinementReport {
  Method method = Method::wl1;
  Verdict verdict = Verdict::not_distinguished;
  /// Refinement rounds performed.
  std::size_t iterations_run = 0;
  /// Set iff distinguished.
  std::optional<std::size_t> distinguishing_iteration;
  /// Histograms of the two graphs, one pair per checked iteration
  /// starting at iteration 0.
  std::vector<std::pair<Histogram, Histogram>> histograms;

  bool distinguished() const { return verdict == Verdict::distinguished; }
};

struct CompareOptions {
  KwlOptions kwl;
};

/// Joint refinement of two graphs with a shared interner. Histograms are
/// compared before each round; the first mismatch decides.
RefinementReport compare(const Graph &a, const Graph &b, Method method,
                         CompareOptions opts = {});

/// Exhaustive label- and edge-preserving bijection search. Throws
/// GraphError when either graph has more than `max_nodes` nodes.
bool brute_force_isomorphic(const Graph &a, const Graph &b,
                            std::size_t max_nodes = 10);

/// Whether signature computation may use worker threads. False when the
/// environment variable WL_NO_PARALLEL is set to 1.
bool parallel_enabled();

}  // namespace ncwl
