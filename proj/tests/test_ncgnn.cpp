#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "ncwl/corpus.hpp"
#include "ncwl/generators.hpp"
#include "ncwl/ncgnn.hpp"
#include "ncwl/suite.hpp"
#include "ncwl/wl.hpp"

namespace ncwl::gnn {
namespace {

MatrixXd random_matrix(Eigen::Index r, Eigen::Index c, std::mt19937_64 &rng, double lo = -1,
                       double hi = 1) {
  std::uniform_real_distribution<double> d(lo, hi);
  MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = d(rng);
  return m;
}

MatrixXd permute_rows(const MatrixXd &h, const std::vector<NodeId> &perm) {
  MatrixXd out(h.rows(), h.cols());
  for (Eigen::Index v = 0; v < h.rows(); ++v) out.row(perm[v]) = h.row(v);
  return out;
}

double linf(const RowVectorXd &a, const RowVectorXd &b) {
  return (a - b).cwiseAbs().maxCoeff();
}

Graph two_triangles() { return disjoint_union(complete_graph(3), complete_graph(3)).first; }

TEST(OneHot, Examples) {
  auto k3 = one_hot_features(complete_graph(3), 1);
  EXPECT_EQ(k3, MatrixXd::Ones(3, 1));
  Graph p3(3, path_graph(3).edges(), {0, 1, 0});
  MatrixXd want(3, 2);
  want << 1, 0, 0, 1, 1, 0;
  EXPECT_EQ(one_hot_features(p3, 2), want);
  EXPECT_THROW(one_hot_features(p3, 1), ShapeError);
}

TEST(OneHot, RowsSumToOne) {
  std::mt19937_64 rng(4);
  auto g = random_gnp(20, 0.2, rng, 5);
  auto h = one_hot_features(g, 5);
  for (Eigen::Index r = 0; r < h.rows(); ++r) EXPECT_EQ(h.row(r).sum(), 1.0);
}

TEST(NcLayer, TriangleWithIdentityMaps) {
  auto k3 = complete_graph(3);
  const MatrixXd h = MatrixXd::Identity(3, 3);
  NcGnnLayer<double> p{Mlp<double>::identity(3), Mlp<double>::identity(3), 0.0};
  const auto out = nc_gnn_layer_forward(k3, h, p);

  // Scalar evaluation: own + both neighbors + the single opposite edge.
  for (int v = 0; v < 3; ++v) {
    const int a = (v + 1) % 3, b = (v + 2) % 3;
    for (int c = 0; c < 3; ++c) {
      double z = h(v, c) + h(a, c) + h(b, c);
      z += std::max(0.0, h(a, c) + h(b, c));
      EXPECT_EQ(out(v, c), z);
    }
  }
  EXPECT_EQ(out.row(0), (RowVectorXd(3) << 1, 2, 2).finished());

  MatrixXd zeros = MatrixXd::Zero(3, 3);
  EXPECT_EQ(nc_gnn_layer_forward_edgefeat(k3, h, zeros, p), out);
}

TEST(NcLayer, ReducesToGinWithoutTriangles) {
  std::mt19937_64 rng(10);
  for (int t = 0; t < 40; ++t) {
    Graph g = t % 3 == 0 ? cycle_graph(4 + t % 7)
              : t % 3 == 1 ? complete_bipartite_graph(1 + t % 4, 2 + t % 3)
                           : random_cycle_union(5 + t % 6, rng);
    if (stats(g).triangle_count != 0) continue;
    auto p = NcGnnLayer<double>::random(4, 6, rng);
    p.epsilon = 0.25;
    const auto h = random_matrix(g.node_count(), 4, rng);
    EXPECT_EQ(nc_gnn_layer_forward(g, h, p), gin_layer_forward(g, h, p.mlp1, p.epsilon));
  }
}

TEST(NcLayer, Equivariance) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 30; ++t) {
    auto g = random_gnp(10, 0.4, rng);
    auto p = NcGnnLayer<double>::random(3, 5, rng);
    const auto h = random_matrix(10, 3, rng);
    const auto perm = random_permutation(10, rng);
    const auto out = nc_gnn_layer_forward(g, h, p);
    const auto out_perm = nc_gnn_layer_forward(g.permuted(perm), permute_rows(h, perm), p);
    EXPECT_LT((permute_rows(out, perm) - out_perm).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(NcLayer, ShapeErrors) {
  auto k3 = complete_graph(3);
  NcGnnLayer<double> p{Mlp<double>::identity(3), Mlp<double>::identity(3), 0.0};
  EXPECT_THROW(nc_gnn_layer_forward(k3, MatrixXd::Identity(2, 3).eval(), p), ShapeError);
  EXPECT_THROW(nc_gnn_layer_forward(k3, MatrixXd::Identity(3, 2).eval(), p), ShapeError);
  EXPECT_THROW(nc_gnn_layer_forward_edgefeat(k3, MatrixXd::Identity(3, 3).eval(),
                                             MatrixXd::Zero(2, 3).eval(), p),
               ShapeError);
  EXPECT_THROW(nc_gnn_layer_forward_edgefeat(k3, MatrixXd::Identity(3, 3).eval(),
                                             MatrixXd::Zero(3, 2).eval(), p),
               ShapeError);
}

TEST(GinLayer, Examples) {
  std::mt19937_64 rng(1);
  auto mlp = Mlp<double>::random(2, 4, 3, rng);
  const auto single = random_matrix(1, 2, rng);
  EXPECT_EQ(gin_layer_forward(empty_graph(1), single, mlp, 0.5).row(0),
            mlp((1.5 * single.row(0)).eval()));

  MatrixXd h(2, 2);
  h << 1, 2, 3, 4;
  auto out = gin_layer_forward(complete_graph(2), h, Mlp<double>::identity(2), 0.0);
  EXPECT_EQ(out.row(0), h.row(0) + h.row(1));
}

TEST(EdgeFeatures, ZeroFeaturesOnNonNegativeInputs) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 20; ++t) {
    auto g = random_gnp(9, 0.5, rng);
    auto p = NcGnnLayer<double>::random(3, 4, rng);
    const auto h = random_matrix(9, 3, rng, 0, 1);
    const MatrixXd e = MatrixXd::Zero(g.edge_count(), 3);
    EXPECT_EQ(nc_gnn_layer_forward_edgefeat(g, h, e, p), nc_gnn_layer_forward(g, h, p));
    EXPECT_EQ(gin_layer_forward_edgefeat(g, h, e, p.mlp1, 0.0),
              gin_layer_forward(g, h, p.mlp1, 0.0));
  }
}

TEST(EdgeFeatures, IsolatedNodeAndTriangle) {
  std::mt19937_64 rng(3);
  auto p = NcGnnLayer<double>::random(2, 3, rng);
  const auto h = random_matrix(1, 2, rng);
  const MatrixXd none(0, 2);
  EXPECT_EQ(nc_gnn_layer_forward_edgefeat(empty_graph(1), h, none, p).row(0),
            p.mlp1(h.row(0)));
  EXPECT_EQ(gin_layer_forward_edgefeat(empty_graph(1), h, none, p.mlp1, 0.0).row(0),
            p.mlp1(h.row(0)));

  auto k3 = complete_graph(3);
  const MatrixXd id = MatrixXd::Identity(3, 3);
  auto gin = gin_layer_forward_edgefeat(k3, id, MatrixXd::Zero(3, 3).eval(),
                                        Mlp<double>::identity(3), 0.0);
  EXPECT_EQ(gin.row(0), (RowVectorXd(3) << 1, 1, 1).finished());
}

TEST(EdgeFeatures, RectifierAndEdgeTermByHand) {
  // P2 plus an edge feature that flips the sign of the neighbor message.
  Graph k2 = complete_graph(2);
  MatrixXd h(2, 1);
  h << 1, 2;
  MatrixXd e(1, 1);
  e << -5;
  auto out = gin_layer_forward_edgefeat(k2, h, e, Mlp<double>::identity(1), 0.0);
  EXPECT_EQ(out(0, 0), 1.0);  // relu(2 - 5) = 0
  EXPECT_EQ(out(1, 0), 2.0);
}

TEST(Readout, Examples) {
  EXPECT_EQ(readout_sum(MatrixXd::Ones(3, 2).eval()), (RowVectorXd(2) << 3, 3).finished());
  EXPECT_EQ(readout_sum(MatrixXd(0, 4)), RowVectorXd::Zero(4));
  std::mt19937_64 rng(9);
  const auto h = random_matrix(6, 3, rng);
  const auto perm = random_permutation(6, rng);
  EXPECT_LT(linf(readout_sum(h), readout_sum(permute_rows(h, perm))), 1e-12);
}

// ---------------------------------------------------------------------------
// Gradients against central finite differences.

struct GradCase {
  Graph g;
  LayerKind kind;
  bool edge_features;
};

double loss(const Graph &g, const MatrixXd &h, const MatrixXd *e, const NcGnnLayer<double> &p,
            const MatrixXd &up, LayerKind kind) {
  MatrixXd out;
  if (kind == LayerKind::nc)
    out = e ? nc_gnn_layer_forward_edgefeat(g, h, *e, p) : nc_gnn_layer_forward(g, h, p);
  else
    out = e ? gin_layer_forward_edgefeat(g, h, *e, p.mlp1, p.epsilon)
            : gin_layer_forward(g, h, p.mlp1, p.epsilon);
  return up.cwiseProduct(out).sum();
}

void collect(Mlp<double> &m, std::vector<double *> &out) {
  for (auto *x : {&m.w1, &m.w2})
    for (Eigen::Index i = 0; i < x->size(); ++i) out.push_back(x->data() + i);
  for (auto *x : {&m.b1, &m.b2})
    for (Eigen::Index i = 0; i < x->size(); ++i) out.push_back(x->data() + i);
}

void collect(MatrixXd &m, std::vector<double *> &out) {
  for (Eigen::Index i = 0; i < m.size(); ++i) out.push_back(m.data() + i);
}

double max_relative_gradient_error(const GradCase &c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Eigen::Index d = 3, out_dim = 4;
  auto p = NcGnnLayer<double>::random(d, out_dim, rng);
  p.epsilon = 0.3;
  MatrixXd h = random_matrix(c.g.node_count(), d, rng);
  MatrixXd e = random_matrix(c.g.edge_count(), d, rng);
  const MatrixXd up = random_matrix(c.g.node_count(), out_dim, rng);
  MatrixXd *ep = c.edge_features ? &e : nullptr;

  auto gr = c.edge_features ? layer_backward_edgefeat(c.g, h, e, p, up, c.kind)
                            : layer_backward(c.g, h, p, up, c.kind);

  std::vector<double *> vars, grads;
  collect(p.mlp1, vars);
  collect(gr.mlp1, grads);
  if (c.kind == LayerKind::nc) {
    collect(p.mlp2, vars);
    collect(gr.mlp2, grads);
  }
  vars.push_back(&p.epsilon);
  grads.push_back(&gr.epsilon);
  collect(h, vars);
  collect(gr.input, grads);
  if (c.edge_features) {
    collect(e, vars);
    collect(gr.edge_features, grads);
  }

  constexpr double step = 1e-5;
  double worst = 0;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const double saved = *vars[i];
    *vars[i] = saved + step;
    const double fp = loss(c.g, h, ep, p, up, c.kind);
    *vars[i] = saved - step;
    const double fm = loss(c.g, h, ep, p, up, c.kind);
    *vars[i] = saved;
    const double numeric = (fp - fm) / (2 * step);
    const double analytic = *grads[i];
    const double scale = std::max({std::abs(numeric), std::abs(analytic), 1e-2});
    worst = std::max(worst, std::abs(numeric - analytic) / scale);
  }
  return worst;
}

TEST(Backward, MatchesFiniteDifferences) {
  std::mt19937_64 rng(100);
  std::vector<Graph> graphs = {complete_graph(3), complete_graph(4), wheel_graph(5),
                               cycle_graph(5), random_gnp(7, 0.6, rng)};
  int configs = 0;
  for (std::size_t gi = 0; gi < graphs.size(); ++gi)
    for (auto kind : {LayerKind::nc, LayerKind::gin})
      for (bool ef : {false, true}) {
        const double err = max_relative_gradient_error({graphs[gi], kind, ef}, 1000 + configs);
        EXPECT_LT(err, 1e-4) << "graph " << gi << " kind " << (kind == LayerKind::nc ? "nc" : "gin")
                             << " edge features " << ef;
        ++configs;
      }
  EXPECT_GE(configs, 20);
}

TEST(Backward, ZeroUpstreamGivesZeroGradients) {
  std::mt19937_64 rng(5);
  auto g = complete_graph(4);
  auto p = NcGnnLayer<double>::random(3, 4, rng);
  const auto h = random_matrix(4, 3, rng);
  auto gr = layer_backward(g, h, p, MatrixXd::Zero(4, 4).eval());
  EXPECT_TRUE(gr.input.isZero(0));
  EXPECT_TRUE(gr.mlp1.w1.isZero(0) && gr.mlp1.b1.isZero(0) && gr.mlp1.w2.isZero(0) &&
              gr.mlp1.b2.isZero(0));
  EXPECT_TRUE(gr.mlp2.w1.isZero(0) && gr.mlp2.b2.isZero(0));
  EXPECT_EQ(gr.epsilon, 0.0);
}

TEST(Backward, NoTrianglesMeansNoMlp2Gradient) {
  std::mt19937_64 rng(6);
  auto g = cycle_graph(6);
  auto p = NcGnnLayer<double>::random(3, 4, rng);
  const auto h = random_matrix(6, 3, rng);
  auto gr = layer_backward(g, h, p, random_matrix(6, 4, rng));
  EXPECT_TRUE(gr.mlp2.w1.isZero(0) && gr.mlp2.b1.isZero(0) && gr.mlp2.w2.isZero(0) &&
              gr.mlp2.b2.isZero(0));
  EXPECT_FALSE(gr.mlp1.w1.isZero(0));
}

TEST(Backward, ShapeError) {
  std::mt19937_64 rng(7);
  auto p = NcGnnLayer<double>::random(3, 4, rng);
  EXPECT_THROW(layer_backward(complete_graph(3), random_matrix(3, 3, rng), p,
                              MatrixXd::Zero(3, 3).eval()),
               ShapeError);
}

// ---------------------------------------------------------------------------
// Whole-graph embeddings.

TEST(Embed, NoLayersGivesLabelHistogram) {
  Graph g(5, path_graph(5).edges(), {0, 2, 2, 1, 2});
  EXPECT_EQ(embed_graph(g, std::vector<NcGnnLayer<double>>{}, 3),
            (RowVectorXd(3) << 1, 1, 3).finished());
}

TEST(Embed, IsomorphicInputsMatch) {
  auto rng = stream_rng(1, "embed-iso");
  for (int t = 0; t < 20; ++t) {
    auto g = random_gnp(10, 0.4, rng, 2);
    auto h = g.permuted(random_permutation(10, rng));
    auto layers = random_layers<double>(2, 8, 2, t);
    EXPECT_LT(linf(embed_graph(g, layers, 2), embed_graph(h, layers, 2)), 1e-9);
  }
}

TEST(Embed, HexagonAndTwoTrianglesDifferForEverySeed) {
  const auto c6 = cycle_graph(6), tt = two_triangles();
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto layers = random_layers<double>(1, 16, 2, seed);
    EXPECT_GT(linf(embed_graph(c6, layers, 1), embed_graph(tt, layers, 1)), 1e-6) << seed;
  }
}

TEST(Embed, LayerWidthsMustChain) {
  auto layers = random_layers<double>(2, 4, 2, 0);
  EXPECT_THROW(embed_graph(complete_graph(3), layers, 3), ShapeError);
}

TEST(Embed, CorpusConsistentWithNcRefinement) {
  for (const auto &e : load_corpus()) {
    const bool nc_distinguishes = e.expected.at(Method::nc1wl) == Verdict::distinguished;
    std::size_t labels = 1;
    for (const auto *g : {&e.g1, &e.g2})
      for (auto l : g->labels()) labels = std::max<std::size_t>(labels, l + 1);
    if (e.g1.node_count() != e.g2.node_count()) continue;
    const auto [a, b] = canonical_pair(e.g1, e.g2, LayerKind::nc);
    int differ = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      auto layers = random_layers<double>(labels, 16, 2, seed);
      const double gap = linf(embed_graph(a, layers, labels), embed_graph(b, layers, labels));
      if (!nc_distinguishes) {
        EXPECT_LT(gap, 1e-9) << e.name << " seed " << seed;
      }
      differ += gap > 1e-6;
    }
    if (nc_distinguishes) {
      EXPECT_GE(differ, 9) << e.name;
    }
  }
}

TEST(Embed, GinCannotSeparateOneWlEquivalentPairs) {
  for (const auto &e : load_corpus()) {
    if (e.expected.at(Method::wl1) == Verdict::distinguished) continue;
    std::size_t labels = 1;
    for (const auto *g : {&e.g1, &e.g2})
      for (auto l : g->labels()) labels = std::max<std::size_t>(labels, l + 1);
    const auto [a, b] = canonical_pair(e.g1, e.g2, LayerKind::gin);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      auto layers = random_layers<double>(labels, 16, 2, seed);
      EXPECT_LT(linf(embed_graph(a, layers, labels, LayerKind::gin),
                     embed_graph(b, layers, labels, LayerKind::gin)),
                1e-9)
          << e.name;
    }
  }
}

TEST(CanonicalPair, IsARelabeling) {
  const auto c6 = cycle_graph(6), tt = two_triangles();
  const auto [a, b] = canonical_pair(c6, tt, LayerKind::nc);
  EXPECT_TRUE(brute_force_isomorphic(a, c6));
  EXPECT_TRUE(brute_force_isomorphic(b, tt));
}

TEST(FloatScalar, TemplatesInstantiate) {
  std::mt19937_64 rng(1);
  auto p = NcGnnLayer<float>::random(1, 4, rng);
  auto h = one_hot_features<float>(complete_graph(3), 1);
  auto out = nc_gnn_layer_forward(complete_graph(3), h, p);
  EXPECT_EQ(out.rows(), 3);
  EXPECT_EQ(out.cols(), 4);
}

}  // namespace
}  // namespace ncwl::gnn
