#pragma once

// JSON form of NC-GNN parameters used by `ncwl gnn-embed`:
//
//   {"num_labels": K, "layers": [{"epsilon": e,
//     "mlp1": {"w1": [[...]], "b1": [...], "w2": [[...]], "b2": [...]},
//     "mlp2": {...}}, ...]}
//
// Matrices are arrays of rows. Doubles round-trip through nlohmann's
// shortest representation.

#include <json.hpp>

#include "ncwl/ncgnn.hpp"

namespace ncwl::gnn {

inline nlohmann::json matrix_to_json(const MatrixXd &m) {
  auto rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    auto row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline MatrixXd matrix_from_json(const nlohmann::json &j, Eigen::Index cols_if_empty = 0) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = rows ? static_cast<Eigen::Index>(j.at(0).size()) : cols_if_empty;
  MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (static_cast<Eigen::Index>(j.at(r).size()) != cols)
      throw ShapeError("ragged matrix in parameter file");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = j.at(r).at(c).get<double>();
  }
  return m;
}

inline nlohmann::json vector_to_json(const RowVectorXd &v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

inline RowVectorXd vector_from_json(const nlohmann::json &j) {
  const auto vals = j.get<std::vector<double>>();
  return Eigen::Map<const RowVectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

inline nlohmann::json mlp_to_json(const Mlp<double> &m) {
  return {{"w1", matrix_to_json(m.w1)}, {"b1", vector_to_json(m.b1)},
          {"w2", matrix_to_json(m.w2)}, {"b2", vector_to_json(m.b2)}};
}

inline Mlp<double> mlp_from_json(const nlohmann::json &j) {
  Mlp<double> m{matrix_from_json(j.at("w1")), vector_from_json(j.at("b1")),
                matrix_from_json(j.at("w2")), vector_from_json(j.at("b2"))};
  if (!m.consistent()) throw ShapeError("inconsistent MLP shapes in parameter file");
  return m;
}

inline nlohmann::json layers_to_json(const std::vector<NcGnnLayer<double>> &layers,
                                     std::size_t num_labels) {
  auto arr = nlohmann::json::array();
  for (const auto &l : layers)
    arr.push_back({{"epsilon", l.epsilon},
                   {"mlp1", mlp_to_json(l.mlp1)},
                   {"mlp2", mlp_to_json(l.mlp2)}});
  return {{"num_labels", num_labels}, {"layers", arr}};
}

inline std::pair<std::vector<NcGnnLayer<double>>, std::size_t> layers_from_json(
    const nlohmann::json &j) {
  std::vector<NcGnnLayer<double>> layers;
  for (const auto &l : j.at("layers"))
    layers.push_back({mlp_from_json(l.at("mlp1")), mlp_from_json(l.at("mlp2")),
                      l.at("epsilon").get<double>()});
  return {std::move(layers), j.at("num_labels").get<std::size_t>()};
}

}  // namespace ncwl::gnn
