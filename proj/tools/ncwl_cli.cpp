// ncwl: command-line front end for the refinement engines, graph
// statistics, the NC-GNN embedder and the property suites.
//
// Exit codes: 0 success / not distinguished, 1 distinguished or a failed
// suite check, 2 usage, input or precondition error.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ncwl/codec.hpp"
#include "ncwl/corpus.hpp"
#include "ncwl/graph.hpp"
#include "ncwl/ncgnn.hpp"
#include "ncwl/suite.hpp"
#include "ncwl/wl.hpp"
#include "params_json.hpp"

namespace {

using namespace ncwl;

constexpr int kExitOk = 0;
constexpr int kExitDistinguished = 1;
constexpr int kExitError = 2;

enum class Format { human, tsv };

struct CliConfig {
  std::string file1;
  std::string file2;
  std::string method = "1wl";
  std::size_t k_cap = 0;
  std::uint64_t seed = 1;
  std::size_t random_pairs = 500;
  std::string format = "human";
  // gnn-embed
  std::size_t layers = 2;
  std::size_t dim = 16;
  std::size_t num_labels = 0;
  bool gin = false;
  std::string params_in;
  std::string params_out;
  // suite
  std::string corpus_dir;
  // codec-check
  std::uint64_t alphabet = 3;
  std::uint64_t max_card = 2;
  std::uint64_t base = 0;
};

/// Shortest round-trip decimal, independent of locale.
std::string num(double x) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

std::string hist_string(const Histogram &h) {
  std::string s;
  for (auto [c, n] : h) {
    if (!s.empty()) s += ',';
    s += std::to_string(c) + ':' + std::to_string(n);
  }
  return s;
}

Method require_method(const std::string &s) {
  auto m = parse_method(s);
  if (!m) throw std::invalid_argument("unknown method '" + s + "' (1wl, nc1wl, 2wl, 3wl)");
  return *m;
}

int cmd_refine(const CliConfig &cfg, Format fmt) {
  const auto g = read_edge_list_file(cfg.file1);
  const auto m = require_method(cfg.method);
  std::vector<Coloring> seq;
  switch (m) {
    case Method::wl1: seq = refine_1wl(g); break;
    case Method::nc1wl: seq = refine_nc1wl(g); break;
    case Method::wl2: seq = refine_kwl(g, 2, {cfg.k_cap}); break;
    case Method::wl3: seq = refine_kwl(g, 3, {cfg.k_cap}); break;
  }
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (fmt == Format::tsv)
      std::cout << i << '\t' << seq[i].num_classes << '\t' << hist_string(seq[i].histogram) << '\n';
    else
      std::cout << "iter " << i << ": classes=" << seq[i].num_classes
                << " hist=" << hist_string(seq[i].histogram) << '\n';
  }
  if (fmt == Format::human)
    std::cout << "converged at iteration " << seq.size() - 1 << " with "
              << seq.back().num_classes << " classes\n";
  return kExitOk;
}

int cmd_compare(const CliConfig &cfg, Format fmt) {
  const auto a = read_edge_list_file(cfg.file1);
  const auto b = read_edge_list_file(cfg.file2);
  CompareOptions opts;
  opts.kwl.max_nodes = cfg.k_cap;
  const auto rep = compare(a, b, require_method(cfg.method), opts);
  if (fmt == Format::tsv) {
    std::cout << (rep.distinguished() ? "DISTINGUISHED" : "NOT-DISTINGUISHED") << '\t'
              << (rep.distinguished() ? *rep.distinguishing_iteration : rep.iterations_run)
              << '\n';
  } else if (rep.distinguished()) {
    std::cout << "DISTINGUISHED iter=" << *rep.distinguishing_iteration << '\n';
  } else {
    std::cout << "NOT-DISTINGUISHED iters=" << rep.iterations_run << '\n';
  }
  return rep.distinguished() ? kExitDistinguished : kExitOk;
}

int cmd_stats(const CliConfig &cfg, Format fmt) {
  const auto s = stats(read_edge_list_file(cfg.file1));
  if (fmt == Format::tsv) {
    std::cout << "n\tm\tT\tsum_nc\tavg_nc\tmax_nc\tmax_deg\tmembound\n"
              << s.node_count << '\t' << s.edge_count << '\t' << s.triangle_count << '\t'
              << s.messages_nc_sum << '\t' << num(s.avg_messages_nc) << '\t'
              << s.max_messages_nc << '\t' << s.max_degree << '\t' << s.memory_bound << '\n';
  } else {
    std::cout << "n=" << s.node_count << " m=" << s.edge_count << " T=" << s.triangle_count
              << " sum_nc=" << s.messages_nc_sum << " avg_nc=" << num(s.avg_messages_nc)
              << " max_nc=" << s.max_messages_nc << " max_deg=" << s.max_degree
              << " membound=" << s.memory_bound << '\n';
  }
  return kExitOk;
}

int cmd_union(const CliConfig &cfg) {
  const auto [u, off] =
      disjoint_union(read_edge_list_file(cfg.file1), read_edge_list_file(cfg.file2));
  std::cout << "# second graph offset " << off << '\n' << to_edge_list(u);
  return kExitOk;
}

int cmd_suite(const CliConfig &cfg, Format fmt) {
  std::vector<CorpusEntry> corpus;
  try {
    corpus = cfg.corpus_dir.empty() ? load_corpus() : load_corpus_dir(cfg.corpus_dir);
  } catch (const CorpusError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  auto checks = run_corpus_checks(corpus);
  SuiteOptions opts;
  opts.seed = cfg.seed;
  opts.random_pairs = cfg.random_pairs;
  for (auto &c : run_random_checks(opts)) checks.push_back(std::move(c));

  bool all = true;
  for (const auto &c : checks) {
    all = all && c.passed;
    if (fmt == Format::tsv)
      std::cout << (c.passed ? "PASS" : "FAIL") << '\t' << c.name << '\t' << c.detail << '\n';
    else
      std::cout << (c.passed ? "[PASS] " : "[FAIL] ") << c.name
                << (c.detail.empty() ? "" : "  " + c.detail) << '\n';
  }
  if (fmt == Format::human)
    std::cout << (all ? "all checks passed" : "some checks FAILED") << " (seed " << cfg.seed
              << ")\n";
  return all ? kExitOk : kExitDistinguished;
}

int cmd_gnn_embed(const CliConfig &cfg, Format fmt) {
  const auto g = read_edge_list_file(cfg.file1);
  std::vector<gnn::NcGnnLayer<double>> layers;
  std::size_t num_labels = cfg.num_labels;
  if (!cfg.params_in.empty()) {
    std::ifstream in(cfg.params_in);
    if (!in) throw std::runtime_error("cannot open " + cfg.params_in);
    std::tie(layers, num_labels) = gnn::layers_from_json(nlohmann::json::parse(in));
  } else {
    if (num_labels == 0)
      for (auto l : g.labels()) num_labels = std::max<std::size_t>(num_labels, l + 1);
    num_labels = std::max<std::size_t>(num_labels, 1);
    layers = gnn::random_layers<double>(num_labels, cfg.dim, cfg.layers, cfg.seed);
  }
  if (!cfg.params_out.empty()) {
    std::ofstream out(cfg.params_out);
    out << gnn::layers_to_json(layers, num_labels).dump(1) << '\n';
    if (!out) throw std::runtime_error("cannot write " + cfg.params_out);
  }
  const auto emb =
      gnn::embed_graph(g, layers, num_labels, cfg.gin ? gnn::LayerKind::gin : gnn::LayerKind::nc);
  const char sep = fmt == Format::tsv ? '\t' : ' ';
  for (Eigen::Index i = 0; i < emb.size(); ++i) std::cout << (i ? std::string(1, sep) : "") << num(emb[i]);
  std::cout << '\n';
  return kExitOk;
}

int cmd_codec_check(const CliConfig &cfg, Format fmt) {
  using namespace ncwl::codec;
  // Fixed worked example: Z(x1) = 0, Z(x3) = 2, N = 4.
  const std::uint64_t fixture[] = {0, 2, 2};
  const bool fixture_ok = encode_multiset(4, fixture) == Rational(9, 8) &&
                          decode_multiset(Rational(9, 8), 4) ==
                              std::vector<std::uint64_t>{0, 2, 2};
  // Multisets of size <= k over s symbols number C(s + k, k).
  auto multisets = [](double s, double k) {
    double c = 1;
    for (double i = 1; i <= k; ++i) c = c * (s + i) / i;
    return c;
  };
  const double a = static_cast<double>(cfg.alphabet), k = static_cast<double>(cfg.max_card);
  const double inputs = multisets(a, k) * multisets(a * (a + 1) / 2, k) * std::max(a, 1.0);
  constexpr double kMaxInputs = 5e6;
  if (inputs > kMaxInputs)
    throw CodecError("enumeration of about " + num(inputs) +
                     " inputs is too large; keep alphabet and max-card small");
  const auto rep = check_injectivity(cfg.alphabet, cfg.max_card, cfg.base);
  const bool ok = fixture_ok && rep.ok();
  if (fmt == Format::tsv) {
    std::cout << "fixture\t" << (fixture_ok ? "PASS" : "FAIL") << '\n'
              << "pairwise\t" << rep.pairwise_inputs << '\t' << rep.pairwise_distinct << '\n'
              << "centered\t" << rep.centered_inputs << '\t' << rep.centered_distinct << '\n';
  } else {
    std::cout << "fixture 4^-0 + 4^-2 + 4^-2 = 9/8 and decode -> {0,2,2}: "
              << (fixture_ok ? "PASS" : "FAIL") << '\n'
              << "base N=" << rep.base << ", alphabet=" << cfg.alphabet
              << ", max-card=" << cfg.max_card << '\n'
              << "pairwise (X,W): " << rep.pairwise_inputs << " inputs, "
              << rep.pairwise_distinct << " distinct\n"
              << "centered (c,X,W): " << rep.centered_inputs << " inputs, "
              << rep.centered_distinct << " distinct\n"
              << (ok ? "injective" : "COLLISION FOUND") << '\n';
  }
  return ok ? kExitOk : kExitDistinguished;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"NC-1-WL / k-WL refinement toolkit"};
  app.footer(
      "Exit codes: 0 = success or NOT-DISTINGUISHED, 1 = DISTINGUISHED or a failed check, "
      "2 = usage, input or precondition error.\nSet WL_NO_PARALLEL=1 to force sequential "
      "signature computation.");
  app.require_subcommand(1);
  CliConfig cfg;
  std::string format = "human";
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"human", "tsv"}))
      ->capture_default_str();

  auto method_opt = [&](CLI::App *sub) {
    sub->add_option("--method", cfg.method, "1wl | nc1wl | 2wl | 3wl")
        ->check(CLI::IsMember({"1wl", "nc1wl", "2wl", "3wl"}))
        ->capture_default_str();
    sub->add_option("--k-cap", cfg.k_cap, "Node cap for k-WL (0 = default)");
  };

  auto *refine = app.add_subcommand("refine", "Print per-iteration color histograms");
  refine->add_option("graph", cfg.file1)->required();
  method_opt(refine);

  auto *cmp = app.add_subcommand("compare", "Jointly refine two graphs and report a verdict");
  cmp->add_option("graph1", cfg.file1)->required();
  cmp->add_option("graph2", cfg.file2)->required();
  method_opt(cmp);

  auto *st = app.add_subcommand("stats", "Triangle and #Message_NC statistics");
  st->add_option("graph", cfg.file1)->required();

  auto *un = app.add_subcommand("union", "Print the disjoint union of two graphs");
  un->add_option("graph1", cfg.file1)->required();
  un->add_option("graph2", cfg.file2)->required();

  auto *suite = app.add_subcommand("suite", "Run the corpus and random property suites");
  suite->add_option("--seed", cfg.seed)->capture_default_str();
  suite->add_option("--random-pairs", cfg.random_pairs)->capture_default_str();
  suite->add_option("--corpus", cfg.corpus_dir, "Corpus directory (default: built-in)");

  auto *emb = app.add_subcommand("gnn-embed", "Sum-readout NC-GNN embedding of a graph");
  emb->add_option("graph", cfg.file1)->required();
  emb->add_option("--layers", cfg.layers)->capture_default_str();
  emb->add_option("--dim", cfg.dim)->capture_default_str()->check(CLI::PositiveNumber);
  emb->add_option("--seed", cfg.seed)->capture_default_str();
  emb->add_option("--num-labels", cfg.num_labels, "One-hot width (default: max label + 1)");
  emb->add_flag("--gin", cfg.gin, "Use GIN layers (drop the neighbor-edge term)");
  emb->add_option("--params", cfg.params_in, "Load parameters from JSON");
  emb->add_option("--params-out", cfg.params_out, "Write the parameters used as JSON");

  auto *codec = app.add_subcommand("codec-check", "Exhaustive injectivity check of the encodings");
  codec->add_option("--alphabet", cfg.alphabet)->capture_default_str();
  codec->add_option("--max-card", cfg.max_card)->capture_default_str();
  codec->add_option("--base", cfg.base, "Codec base N (default 4 * max-card + 3)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kExitError;
  }

  const Format fmt = format == "tsv" ? Format::tsv : Format::human;
  try {
    if (*refine) return cmd_refine(cfg, fmt);
    if (*cmp) return cmd_compare(cfg, fmt);
    if (*st) return cmd_stats(cfg, fmt);
    if (*un) return cmd_union(cfg);
    if (*suite) return cmd_suite(cfg, fmt);
    if (*emb) return cmd_gnn_embed(cfg, fmt);
    if (*codec) return cmd_codec_check(cfg, fmt);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
