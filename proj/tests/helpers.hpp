#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "iifs/feature_table.hpp"
#include "iifs/rng.hpp"
#include "iifs/severity_tree.hpp"

namespace testutil {

inline double gauss(iifs::Rng& rng) {
  // Box-Muller; std::normal_distribution is implementation-defined
  const double u1 = rng.uniform_open01();
  const double u2 = rng.uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

inline Eigen::MatrixXd gaussian_matrix(int n, int d, std::uint64_t seed) {
  iifs::Rng rng(seed);
  Eigen::MatrixXd m(n, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < n; ++i) m(i, j) = gauss(rng);
  return m;
}

// all-numeric input table; the last n_outputs columns get role=output
inline std::shared_ptr<iifs::FeatureTable> table_from_matrix(
    const Eigen::MatrixXd& values, const iifs::BoolArray* present = nullptr,
    int n_outputs = 0) {
  const int n = static_cast<int>(values.rows());
  const int d = static_cast<int>(values.cols());
  std::vector<iifs::FeatureMeta> metas;
  for (int j = 0; j < d; ++j) {
    iifs::FeatureMeta m;
    m.name = "f" + std::to_string(j);
    m.kind = iifs::FeatureKind::numeric;
    m.role = j >= d - n_outputs ? iifs::FeatureRole::output : iifs::FeatureRole::input;
    metas.push_back(std::move(m));
  }
  std::vector<std::string> ids;
  for (int i = 0; i < n; ++i) ids.push_back("r" + std::to_string(i));
  iifs::BoolArray mask =
      present ? *present : iifs::BoolArray::Constant(n, d, true);
  return std::make_shared<iifs::FeatureTable>(std::move(metas), std::move(ids),
                                              values, std::move(mask));
}

// chain-shaped target: d(a,b) = |a-b|
inline iifs::TargetTree line_tree(int n_leaves) {
  iifs::TargetTree tree;
  for (int l = 0; l < n_leaves; ++l) tree.leaf_names.push_back("leaf" + std::to_string(l));
  tree.distance.resize(n_leaves, n_leaves);
  for (int a = 0; a < n_leaves; ++a)
    for (int b = 0; b < n_leaves; ++b) tree.distance(a, b) = std::abs(a - b);
  return tree;
}

inline iifs::TargetTree two_leaf_tree(int distance) {
  iifs::TargetTree tree;
  tree.leaf_names = {"near", "far"};
  tree.distance.resize(2, 2);
  tree.distance << 0, distance, distance, 0;
  return tree;
}

inline Eigen::VectorXi random_labels(int n, int n_leaves, std::uint64_t seed) {
  iifs::Rng rng(seed);
  Eigen::VectorXi labels(n);
  for (int i = 0; i < n; ++i) labels[i] = rng.uniform_int(n_leaves);
  return labels;
}

inline Eigen::VectorXi labels_from_sizes(const std::vector<int>& sizes) {
  int n = 0;
  for (int s : sizes) n += s;
  Eigen::VectorXi labels(n);
  int idx = 0;
  for (std::size_t l = 0; l < sizes.size(); ++l)
    for (int k = 0; k < sizes[l]; ++k) labels[idx++] = static_cast<int>(l);
  return labels;
}

}  // namespace testutil
