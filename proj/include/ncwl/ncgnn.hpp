#pragma once

// NC-GNN and GIN layers on dense Eigen matrices, templated on the scalar.
//
// Rows of a feature matrix are nodes. Every per-node reduction walks
// neighbors and neighbor edges in ascending id order and every MLP is
// applied one row at a time, so a row's value depends only on the values
// it aggregates and their order, never on its position in the matrix.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ncwl/graph.hpp"
#include "ncwl/wl.hpp"

namespace ncwl::gnn {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename Scalar>
using RowVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

using MatrixXd = Matrix<double>;
using RowVectorXd = RowVector<double>;

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Two affine maps with a rectifier between them, acting on row vectors:
/// y = relu(x w1 + b1) w2 + b2.
template <typename Scalar>
struct Mlp {
  Matrix<Scalar> w1;
  RowVector<Scalar> b1;
  Matrix<Scalar> w2;
  RowVector<Scalar> b2;

  Eigen::Index in_dim() const { return w1.rows(); }
  Eigen::Index hidden_dim() const { return w1.cols(); }
  Eigen::Index out_dim() const { return w2.cols(); }

  bool consistent() const {
    return b1.size() == w1.cols() && w2.rows() == w1.cols() && b2.size() == w2.cols();
  }

  template <typename Derived>
  RowVector<Scalar> operator()(const Eigen::MatrixBase<Derived> &x) const {
    RowVector<Scalar> hidden = (x * w1 + b1).cwiseMax(Scalar(0));
    return hidden * w2 + b2;
  }

  static Mlp zeros(Eigen::Index in, Eigen::Index hidden, Eigen::Index out) {
    return {Matrix<Scalar>::Zero(in, hidden), RowVector<Scalar>::Zero(hidden),
            Matrix<Scalar>::Zero(hidden, out), RowVector<Scalar>::Zero(out)};
  }

  /// Identity weights and zero biases; the identity map on non-negative
  /// inputs.
  static Mlp identity(Eigen::Index dim) {
    return {Matrix<Scalar>::Identity(dim, dim), RowVector<Scalar>::Zero(dim),
            Matrix<Scalar>::Identity(dim, dim), RowVector<Scalar>::Zero(dim)};
  }

  /// Weights and biases uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)].
  static Mlp random(Eigen::Index in, Eigen::Index hidden, Eigen::Index out,
                    std::mt19937_64 &rng) {
    auto fill = [&rng](auto &m, Eigen::Index fan_in) {
      const Scalar bound = Scalar(1) / std::sqrt(Scalar(std::max<Eigen::Index>(fan_in, 1)));
      std::uniform_real_distribution<Scalar> dist(-bound, bound);
      for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = dist(rng);
    };
    Mlp p = zeros(in, hidden, out);
    fill(p.w1, in);
    fill(p.b1, in);
    fill(p.w2, hidden);
    fill(p.b2, hidden);
    return p;
  }
};

/// Parameters of one NC-GNN layer. `mlp2` maps the input dimension to
/// itself; GIN layers ignore it.
template <typename Scalar>
struct NcGnnLayer {
  Mlp<Scalar> mlp1;
  Mlp<Scalar> mlp2;
  Scalar epsilon = 0;

  Eigen::Index in_dim() const { return mlp1.in_dim(); }
  Eigen::Index out_dim() const { return mlp1.out_dim(); }

  static NcGnnLayer random(Eigen::Index in, Eigen::Index out, std::mt19937_64 &rng) {
    NcGnnLayer l;
    l.mlp1 = Mlp<Scalar>::random(in, out, out, rng);
    l.mlp2 = Mlp<Scalar>::random(in, in, in, rng);
    return l;
  }
};

enum class LayerKind { nc, gin };

/// Row v is the one-hot vector of label(v). Throws ShapeError for a label
/// outside [0, num_labels).
template <typename Scalar = double>
Matrix<Scalar> one_hot_features(const Graph &g, std::size_t num_labels) {
  Matrix<Scalar> h = Matrix<Scalar>::Zero(g.node_count(), num_labels);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (g.label(v) >= num_labels)
      throw ShapeError("label " + std::to_string(g.label(v)) + " of node " +
                       std::to_string(v) + " is outside [0, " +
                       std::to_string(num_labels) + ")");
    h(v, g.label(v)) = Scalar(1);
  }
  return h;
}

namespace detail {

template <typename Scalar>
void check_layer(const Graph &g, const Matrix<Scalar> &h, const NcGnnLayer<Scalar> &p,
                 LayerKind kind, const Matrix<Scalar> *edge_features) {
  if (static_cast<std::size_t>(h.rows()) != g.node_count())
    throw ShapeError("feature rows " + std::to_string(h.rows()) + " != node count " +
                     std::to_string(g.node_count()));
  if (!p.mlp1.consistent() || p.mlp1.in_dim() != h.cols())
    throw ShapeError("mlp1 expects input dim " + std::to_string(p.mlp1.in_dim()) +
                     ", features have " + std::to_string(h.cols()));
  if (kind == LayerKind::nc &&
      (!p.mlp2.consistent() || p.mlp2.in_dim() != h.cols() || p.mlp2.out_dim() != h.cols()))
    throw ShapeError("mlp2 must map dim " + std::to_string(h.cols()) + " to itself");
  if (edge_features) {
    if (static_cast<std::size_t>(edge_features->rows()) != g.edge_count())
      throw ShapeError("expected one edge feature row per edge (" +
                       std::to_string(g.edge_count()) + "), got " +
                       std::to_string(edge_features->rows()));
    if (edge_features->cols() != h.cols())
      throw ShapeError("edge feature dim " + std::to_string(edge_features->cols()) +
                       " != node dim " + std::to_string(h.cols()));
  }
}

template <typename Scalar>
std::size_t edge_row(const Graph &g, NodeId u, NodeId v) {
  return static_cast<std::size_t>(g.edge_index(u, v));
}

/// Pre-MLP1 aggregate of node v:
/// (1 + eps) h_v + sum_u msg(u) + [nc] sum_{(u1,u2)} mlp2(h_u1 + h_u2 [+ e]).
template <typename Scalar>
RowVector<Scalar> aggregate(const Graph &g, const Matrix<Scalar> &h,
                            const NcGnnLayer<Scalar> &p, LayerKind kind,
                            const Matrix<Scalar> *ef, NodeId v) {
  RowVector<Scalar> z = (Scalar(1) + p.epsilon) * h.row(v);
  for (auto u : g.neighbors(v)) {
    if (ef)
      z += (h.row(u) + ef->row(edge_row<Scalar>(g, u, v))).cwiseMax(Scalar(0));
    else
      z += h.row(u);
  }
  if (kind == LayerKind::nc) {
    for_each_neighbor_edge(g, v, [&](NodeId a, NodeId b) {
      if (ef)
        z += p.mlp2(h.row(a) + h.row(b) + ef->row(edge_row<Scalar>(g, a, b)));
      else
        z += p.mlp2(h.row(a) + h.row(b));
    });
  }
  return z;
}

template <typename Scalar>
Matrix<Scalar> forward(const Graph &g, const Matrix<Scalar> &h, const NcGnnLayer<Scalar> &p,
                       LayerKind kind, const Matrix<Scalar> *ef) {
  check_layer(g, h, p, kind, ef);
  Matrix<Scalar> out(h.rows(), p.out_dim());
  for (NodeId v = 0; v < g.node_count(); ++v)
    out.row(v) = p.mlp1(aggregate(g, h, p, kind, ef, v));
  return out;
}

}  // namespace detail

/// h'_v = mlp1((1 + eps) h_v + sum_{u in N(v)} h_u
///             + sum_{u1,u2 in N(v), (u1,u2) in E} mlp2(h_u1 + h_u2)).
template <typename Scalar>
Matrix<Scalar> nc_gnn_layer_forward(const Graph &g, const Matrix<Scalar> &h,
                                    const NcGnnLayer<Scalar> &p) {
  return detail::forward(g, h, p, LayerKind::nc, static_cast<const Matrix<Scalar> *>(nullptr));
}

/// GIN: the NC layer without the neighbor-edge term.
template <typename Scalar>
Matrix<Scalar> gin_layer_forward(const Graph &g, const Matrix<Scalar> &h,
                                 const Mlp<Scalar> &mlp1, Scalar epsilon) {
  NcGnnLayer<Scalar> p{mlp1, {}, epsilon};
  return detail::forward(g, h, p, LayerKind::gin, static_cast<const Matrix<Scalar> *>(nullptr));
}

/// Edge-featured NC layer: neighbor messages become relu(h_u + e_uv) and
/// neighbor-edge messages mlp2(h_u1 + h_u2 + e_u1u2). Row i of
/// `edge_features` belongs to `g.edges()[i]`.
template <typename Scalar>
Matrix<Scalar> nc_gnn_layer_forward_edgefeat(const Graph &g, const Matrix<Scalar> &h,
                                             const Matrix<Scalar> &edge_features,
                                             const NcGnnLayer<Scalar> &p) {
  return detail::forward(g, h, p, LayerKind::nc, &edge_features);
}

template <typename Scalar>
Matrix<Scalar> gin_layer_forward_edgefeat(const Graph &g, const Matrix<Scalar> &h,
                                          const Matrix<Scalar> &edge_features,
                                          const Mlp<Scalar> &mlp1, Scalar epsilon) {
  NcGnnLayer<Scalar> p{mlp1, {}, epsilon};
  return detail::forward(g, h, p, LayerKind::gin, &edge_features);
}

/// Column sums in row order.
template <typename Scalar>
RowVector<Scalar> readout_sum(const Matrix<Scalar> &h) {
  RowVector<Scalar> s = RowVector<Scalar>::Zero(h.cols());
  for (Eigen::Index r = 0; r < h.rows(); ++r) s += h.row(r);
  return s;
}

template <typename Scalar>
struct LayerGradients {
  Matrix<Scalar> input;
  Mlp<Scalar> mlp1;
  Mlp<Scalar> mlp2;
  Scalar epsilon = 0;
  /// Empty unless edge features were supplied.
  Matrix<Scalar> edge_features;
};

namespace detail {

/// Reverse pass of one MLP at input x; accumulates parameter gradients into
/// `grad` and returns dL/dx.
template <typename Scalar, typename Derived>
RowVector<Scalar> mlp_backward(const Mlp<Scalar> &m, const Eigen::MatrixBase<Derived> &x,
                               const RowVector<Scalar> &dy, Mlp<Scalar> &grad) {
  RowVector<Scalar> pre = x * m.w1 + m.b1;
  RowVector<Scalar> act = pre.cwiseMax(Scalar(0));
  grad.b2 += dy;
  grad.w2.noalias() += act.transpose() * dy;
  RowVector<Scalar> dpre = dy * m.w2.transpose();
  for (Eigen::Index i = 0; i < dpre.size(); ++i)
    if (!(pre[i] > Scalar(0))) dpre[i] = Scalar(0);
  grad.b1 += dpre;
  grad.w1.noalias() += x.transpose() * dpre;
  return dpre * m.w1.transpose();
}

template <typename Scalar>
LayerGradients<Scalar> backward(const Graph &g, const Matrix<Scalar> &h,
                                const NcGnnLayer<Scalar> &p, const Matrix<Scalar> &upstream,
                                LayerKind kind, const Matrix<Scalar> *ef) {
  check_layer(g, h, p, kind, ef);
  if (upstream.rows() != h.rows() || upstream.cols() != p.out_dim())
    throw ShapeError("upstream gradient must be " + std::to_string(h.rows()) + "x" +
                     std::to_string(p.out_dim()));
  const auto d = h.cols();
  LayerGradients<Scalar> gr;
  gr.input = Matrix<Scalar>::Zero(h.rows(), d);
  gr.mlp1 = Mlp<Scalar>::zeros(p.mlp1.in_dim(), p.mlp1.hidden_dim(), p.mlp1.out_dim());
  if (kind == LayerKind::nc)
    gr.mlp2 = Mlp<Scalar>::zeros(p.mlp2.in_dim(), p.mlp2.hidden_dim(), p.mlp2.out_dim());
  if (ef) gr.edge_features = Matrix<Scalar>::Zero(ef->rows(), ef->cols());

  for (NodeId v = 0; v < g.node_count(); ++v) {
    const RowVector<Scalar> z = aggregate(g, h, p, kind, ef, v);
    const RowVector<Scalar> dy = upstream.row(v);
    const RowVector<Scalar> dz = mlp_backward(p.mlp1, z, dy, gr.mlp1);

    gr.input.row(v) += (Scalar(1) + p.epsilon) * dz;
    gr.epsilon += dz.dot(h.row(v));
    for (auto u : g.neighbors(v)) {
      if (ef) {
        const auto e = edge_row<Scalar>(g, u, v);
        const RowVector<Scalar> pre = h.row(u) + ef->row(e);
        RowVector<Scalar> dm = dz;
        for (Eigen::Index i = 0; i < d; ++i)
          if (!(pre[i] > Scalar(0))) dm[i] = Scalar(0);
        gr.input.row(u) += dm;
        gr.edge_features.row(e) += dm;
      } else {
        gr.input.row(u) += dz;
      }
    }
    if (kind == LayerKind::nc) {
      for_each_neighbor_edge(g, v, [&](NodeId a, NodeId b) {
        RowVector<Scalar> s = h.row(a) + h.row(b);
        std::size_t e = 0;
        if (ef) {
          e = edge_row<Scalar>(g, a, b);
          s += ef->row(e);
        }
        const RowVector<Scalar> ds = mlp_backward(p.mlp2, s, dz, gr.mlp2);
        gr.input.row(a) += ds;
        gr.input.row(b) += ds;
        if (ef) gr.edge_features.row(e) += ds;
      });
    }
  }
  return gr;
}

}  // namespace detail

/// Reverse-mode gradients of sum(upstream .* layer(h)) with respect to the
/// input features and every layer parameter. An all-ones upstream gives the
/// gradient of the summed readout.
template <typename Scalar>
LayerGradients<Scalar> layer_backward(const Graph &g, const Matrix<Scalar> &h,
                                      const NcGnnLayer<Scalar> &p,
                                      const Matrix<Scalar> &upstream,
                                      LayerKind kind = LayerKind::nc) {
  return detail::backward(g, h, p, upstream, kind,
                          static_cast<const Matrix<Scalar> *>(nullptr));
}

template <typename Scalar>
LayerGradients<Scalar> layer_backward_edgefeat(const Graph &g, const Matrix<Scalar> &h,
                                               const Matrix<Scalar> &edge_features,
                                               const NcGnnLayer<Scalar> &p,
                                               const Matrix<Scalar> &upstream,
                                               LayerKind kind = LayerKind::nc) {
  return detail::backward(g, h, p, upstream, kind, &edge_features);
}

/// one_hot_features -> layers -> readout_sum.
template <typename Scalar>
RowVector<Scalar> embed_graph(const Graph &g, const std::vector<NcGnnLayer<Scalar>> &layers,
                              std::size_t num_labels, LayerKind kind = LayerKind::nc) {
  Matrix<Scalar> h = one_hot_features<Scalar>(g, num_labels);
  for (const auto &layer : layers) {
    h = kind == LayerKind::nc ? nc_gnn_layer_forward(g, h, layer)
                              : gin_layer_forward(g, h, layer.mlp1, layer.epsilon);
  }
  return readout_sum(h);
}

/// `count` layers of width `dim` on top of `num_labels` one-hot inputs,
/// seeded deterministically; eps starts at 0.
template <typename Scalar = double>
std::vector<NcGnnLayer<Scalar>> random_layers(std::size_t num_labels, std::size_t dim,
                                              std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<NcGnnLayer<Scalar>> layers;
  Eigen::Index in = static_cast<Eigen::Index>(num_labels);
  for (std::size_t i = 0; i < count; ++i) {
    layers.push_back(NcGnnLayer<Scalar>::random(in, static_cast<Eigen::Index>(dim), rng));
    in = static_cast<Eigen::Index>(dim);
  }
  return layers;
}

/// Relabels both graphs so nodes appear sorted by their converged joint
/// refinement color (ties keep original order). Afterwards the two graphs'
/// summation orders line up color class by color class. NC layers use the
/// NC-1-WL coloring, GIN layers the 1-WL coloring.
std::pair<Graph, Graph> canonical_pair(const Graph &a, const Graph &b, LayerKind kind);

}  // namespace ncwl::gnn
