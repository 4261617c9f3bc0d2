#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ncwl/graph.hpp"
#include "ncwl/wl.hpp"

namespace ncwl {

class CorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Provenance { paper, derived, trivial };

std::string_view provenance_name(Provenance p);

/// A named graph pair with the verdict each method is expected to reach.
struct CorpusEntry {
  std::string name;
  std::string file1;
  std::string file2;
  Graph g1;
  Graph g2;
  std::map<Method, Verdict> expected;
  Provenance provenance = Provenance::derived;
  /// nullopt when the pair is too large for the brute-force oracle.
  std::optional<bool> oracle_isomorphic;
};

/// Parses a manifest. Each non-comment line reads
/// `name | file1 | file2 | 1wl=d|n | nc1wl=d|n | 2wl=d|n | 3wl=d|n | iso=t|f|x | prov=paper|derived|trivial`;
/// `read_file` resolves the file columns. Entries whose verdicts break the
/// 1wl => nc1wl => 3wl chain, disagree between 1wl and 2wl, or claim a
/// distinguished isomorphic pair are rejected. Throws CorpusError (parse
/// failures of the graph files are rethrown as CorpusError too).
std::vector<CorpusEntry> parse_manifest(
    std::string_view manifest,
    const std::function<std::string(const std::string &)> &read_file);

/// The corpus compiled into the library.
std::vector<CorpusEntry> load_corpus();

/// Reads `manifest.txt` and the graph files it names from `dir`.
std::vector<CorpusEntry> load_corpus_dir(const std::filesystem::path &dir);

}  // namespace ncwl
