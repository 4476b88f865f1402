#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "iifs/csv.hpp"
#include "iifs/feature_table.hpp"

namespace iifs {

// Degenerate target metric: a small set of outcome classes (leaves) with a
// symmetric, zero-diagonal integer distance between them. Only the relative
// order of the distances matters downstream.
struct TargetTree {
  std::vector<std::string> leaf_names;
  Eigen::MatrixXi distance;
  Eigen::VectorXi leaf_sizes;  // counts over the full data set; empty until labels are known

  int n_leaves() const { return static_cast<int>(leaf_names.size()); }
  int max_distance() const { return distance.maxCoeff(); }
  int majority_leaf() const;  // largest leaf, ties toward the smaller index
};

int tree_distance(int a, int b, const TargetTree& tree);

// Declarative leaf assignment from binary output columns: one event split
// (any event column set) and a complication split by category.
struct SeverityRules {
  std::vector<std::string> event_columns;
  std::vector<std::string> infectious_columns;
  std::vector<std::string> other_complication_columns;
};

struct TreePreset {
  TargetTree tree;
  std::optional<SeverityRules> rules;
  std::optional<std::string> label_column;
};

// JSON preset: {"leaves": [...], "distance": [[...]], "rules": {...}} or
// {"label_column": "..."} instead of rules.
TreePreset load_tree_preset(const std::filesystem::path& path);

// leaf index = 4*event + (none=0 | infectious=1 | other=2 | both=3)
Eigen::VectorXi labels_from_rules(const FeatureTable& table, const SeverityRules& rules);

// Reads leaf labels from a raw CSV column holding leaf names or 0-based indices.
Eigen::VectorXi labels_from_column(const CsvTable& data, const std::string& column,
                                   const std::vector<std::string>& leaf_names);

// Per-record weight 1/leafsize[label]; every leaf contributes equal total mass.
Eigen::VectorXd class_weights(const Eigen::VectorXi& labels,
                              const Eigen::VectorXi& leaf_sizes);

}  // namespace iifs
