#include "ncwl/corpus.hpp"

#include <fstream>
#include <sstream>

#include "corpus_data.hpp"

namespace ncwl {

std::string_view provenance_name(Provenance p) {
  switch (p) {
    case Provenance::paper: return "paper";
    case Provenance::derived: return "derived";
    case Provenance::trivial: return "trivial";
  }
  return "?";
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_bar(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  for (;;) {
    auto bar = s.find('|', pos);
    out.push_back(trim(s.substr(pos, bar == std::string_view::npos ? bar : bar - pos)));
    if (bar == std::string_view::npos) break;
    pos = bar + 1;
  }
  return out;
}

[[noreturn]] void fail(std::size_t line, const std::string &what) {
  throw CorpusError("manifest line " + std::to_string(line) + ": " + what);
}

std::string_view value_of(std::string_view field, std::string_view key, std::size_t line) {
  if (field.size() <= key.size() || field.substr(0, key.size()) != key ||
      field[key.size()] != '=')
    fail(line, "expected '" + std::string(key) + "=...', got '" + std::string(field) + "'");
  return field.substr(key.size() + 1);
}

bool distinguished(const CorpusEntry &e, Method m) {
  return e.expected.at(m) == Verdict::distinguished;
}

}  // namespace

std::vector<CorpusEntry> parse_manifest(
    std::string_view manifest,
    const std::function<std::string(const std::string &)> &read_file) {
  std::vector<CorpusEntry> out;
  std::size_t number = 0, pos = 0;
  while (pos < manifest.size()) {
    auto nl = manifest.find('\n', pos);
    if (nl == std::string_view::npos) nl = manifest.size();
    auto line = trim(manifest.substr(pos, nl - pos));
    pos = nl + 1;
    ++number;
    if (line.empty() || line.front() == '#') continue;

    auto f = split_bar(line);
    if (f.size() != 9) fail(number, "expected 9 '|'-separated fields, got " + std::to_string(f.size()));
    CorpusEntry e;
    e.name = f[0];
    e.file1 = f[1];
    e.file2 = f[2];
    if (e.name.empty()) fail(number, "empty name");

    constexpr Method methods[] = {Method::wl1, Method::nc1wl, Method::wl2, Method::wl3};
    for (int i = 0; i < 4; ++i) {
      auto v = value_of(f[3 + i], method_name(methods[i]), number);
      if (v == "d") e.expected[methods[i]] = Verdict::distinguished;
      else if (v == "n") e.expected[methods[i]] = Verdict::not_distinguished;
      else fail(number, "verdict must be d or n");
    }
    auto iso = value_of(f[7], "iso", number);
    if (iso == "t") e.oracle_isomorphic = true;
    else if (iso == "f") e.oracle_isomorphic = false;
    else if (iso != "x") fail(number, "iso must be t, f or x");
    auto prov = value_of(f[8], "prov", number);
    if (prov == "paper") e.provenance = Provenance::paper;
    else if (prov == "derived") e.provenance = Provenance::derived;
    else if (prov == "trivial") e.provenance = Provenance::trivial;
    else fail(number, "prov must be paper, derived or trivial");

    if (distinguished(e, Method::wl1) && !distinguished(e, Method::nc1wl))
      fail(number, "1wl distinguishes but nc1wl does not");
    if (distinguished(e, Method::nc1wl) && !distinguished(e, Method::wl3))
      fail(number, "nc1wl distinguishes but 3wl does not");
    if (e.expected[Method::wl1] != e.expected[Method::wl2])
      fail(number, "2wl verdict must equal 1wl verdict");
    if (e.oracle_isomorphic == true)
      for (auto [m, v] : e.expected)
        if (v == Verdict::distinguished) fail(number, "isomorphic pair marked distinguished");

    try {
      e.g1 = parse_edge_list(read_file(e.file1));
      e.g2 = parse_edge_list(read_file(e.file2));
    } catch (const GraphError &err) {
      fail(number, err.what());
    }
    out.push_back(std::move(e));
  }
  if (out.empty()) throw CorpusError("manifest has no entries");
  return out;
}

std::vector<CorpusEntry> load_corpus() {
  return parse_manifest(detail::embedded_manifest(), [](const std::string &name) {
    auto text = detail::embedded_file(name);
    if (!text) throw CorpusError("corpus file '" + name + "' is not embedded");
    return std::string(*text);
  });
}

std::vector<CorpusEntry> load_corpus_dir(const std::filesystem::path &dir) {
  auto slurp = [](const std::filesystem::path &p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw CorpusError("cannot open " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const auto manifest = slurp(dir / "manifest.txt");
  return parse_manifest(manifest, [&](const std::string &name) { return slurp(dir / name); });
}

}  // namespace ncwl
