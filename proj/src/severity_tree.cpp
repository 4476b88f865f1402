#include "iifs/severity_tree.hpp"

#include <charconv>
#include <fstream>
#include <nlohmann/json.hpp>

#include "iifs/error.hpp"

namespace iifs {

int TargetTree::majority_leaf() const {
  if (leaf_sizes.size() == 0) throw input_error("TargetTree: leaf sizes not set");
  int best = 0;
  for (int l = 1; l < n_leaves(); ++l)
    if (leaf_sizes[l] > leaf_sizes[best]) best = l;
  return best;
}

int tree_distance(int a, int b, const TargetTree& tree) {
  if (a < 0 || a >= tree.n_leaves() || b < 0 || b >= tree.n_leaves())
    throw input_error("tree_distance: leaf index out of range");
  return tree.distance(a, b);
}

namespace {

void validate_tree(const TargetTree& tree) {
  const int L = tree.n_leaves();
  if (L < 2) throw input_error("tree preset needs at least 2 leaves");
  if (tree.distance.rows() != L || tree.distance.cols() != L)
    throw input_error("tree distance matrix must be " + std::to_string(L) + "x" +
                      std::to_string(L));
  for (int a = 0; a < L; ++a) {
    if (tree.distance(a, a) != 0) throw input_error("tree distance diagonal must be 0");
    for (int b = 0; b < L; ++b) {
      if (tree.distance(a, b) < 0) throw input_error("tree distances must be nonnegative");
      if (tree.distance(a, b) != tree.distance(b, a))
        throw input_error("tree distance matrix must be symmetric");
      if (a != b && tree.distance(a, b) == 0)
        throw input_error("distinct leaves must have nonzero distance");
    }
  }
}

}  // namespace

TreePreset load_tree_preset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open tree preset " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw input_error("tree preset " + path.string() + ": " + e.what());
  }

  TreePreset preset;
  try {
    preset.tree.leaf_names = j.at("leaves").get<std::vector<std::string>>();
    const auto rows = j.at("distance").get<std::vector<std::vector<int>>>();
    const int L = static_cast<int>(preset.tree.leaf_names.size());
    preset.tree.distance.resize(L, L);
    if (static_cast<int>(rows.size()) != L)
      throw input_error("distance matrix row count mismatch");
    for (int a = 0; a < L; ++a) {
      if (static_cast<int>(rows[static_cast<std::size_t>(a)].size()) != L)
        throw input_error("distance matrix column count mismatch");
      for (int b = 0; b < L; ++b)
        preset.tree.distance(a, b) = rows[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
    }
    if (j.contains("rules")) {
      SeverityRules rules;
      const auto& r = j.at("rules");
      rules.event_columns = r.at("event_columns").get<std::vector<std::string>>();
      rules.infectious_columns =
          r.value("infectious_columns", std::vector<std::string>{});
      rules.other_complication_columns =
          r.value("other_complication_columns", std::vector<std::string>{});
      preset.rules = std::move(rules);
    }
    if (j.contains("label_column"))
      preset.label_column = j.at("label_column").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw input_error("tree preset " + path.string() + ": " + e.what());
  }
  validate_tree(preset.tree);
  if (preset.rules && preset.tree.n_leaves() != 8)
    throw input_error("rule-based labeling requires the 8-leaf severity preset");
  return preset;
}

namespace {

// strict binary read of an output column; missing values are not allowed
bool binary_at(const FeatureTable& table, int col, int record) {
  if (!table.present()(record, col))
    throw input_error("output feature '" + table.meta(col).name +
                      "' missing for record " + table.record_ids()[static_cast<std::size_t>(record)]);
  const double v = table.values()(record, col);
  if (v != 0.0 && v != 1.0)
    throw input_error("output feature '" + table.meta(col).name +
                      "' must be 0/1, got " + std::to_string(v));
  return v == 1.0;
}

std::vector<int> resolve_columns(const FeatureTable& table,
                                 const std::vector<std::string>& names) {
  std::vector<int> out;
  for (const auto& name : names) {
    const auto idx = table.feature_index(name);
    if (!idx) throw input_error("rule column '" + name + "' not found in table");
    if (table.meta(*idx).role != FeatureRole::output)
      throw input_error("rule column '" + name + "' must have role=output");
    out.push_back(*idx);
  }
  return out;
}

}  // namespace

Eigen::VectorXi labels_from_rules(const FeatureTable& table, const SeverityRules& rules) {
  const auto event_cols = resolve_columns(table, rules.event_columns);
  const auto infectious_cols = resolve_columns(table, rules.infectious_columns);
  const auto other_cols = resolve_columns(table, rules.other_complication_columns);
  if (event_cols.empty()) throw input_error("rules need at least one event column");

  Eigen::VectorXi labels(table.n_records());
  for (int i = 0; i < table.n_records(); ++i) {
    bool event = false, infectious = false, other = false;
    for (int c : event_cols) event = event || binary_at(table, c, i);
    for (int c : infectious_cols) infectious = infectious || binary_at(table, c, i);
    for (int c : other_cols) other = other || binary_at(table, c, i);
    const int sub = infectious && other ? 3 : other ? 2 : infectious ? 1 : 0;
    labels[i] = (event ? 4 : 0) + sub;
  }
  return labels;
}

Eigen::VectorXi labels_from_column(const CsvTable& data, const std::string& column,
                                   const std::vector<std::string>& leaf_names) {
  const int col = data.column_index(column);
  if (col < 0) throw input_error("label column '" + column + "' not found in data CSV");
  Eigen::VectorXi labels(static_cast<Eigen::Index>(data.n_rows()));
  for (std::size_t r = 0; r < data.n_rows(); ++r) {
    const std::string& cell = data.rows[r][static_cast<std::size_t>(col)];
    int value = -1;
    for (std::size_t l = 0; l < leaf_names.size(); ++l)
      if (leaf_names[l] == cell) value = static_cast<int>(l);
    if (value < 0) {
      int parsed = 0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), parsed);
      if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size() || parsed < 0 ||
          parsed >= static_cast<int>(leaf_names.size()))
        throw input_error("label '" + cell + "' is neither a leaf name nor a 0-based index");
      value = parsed;
    }
    labels[static_cast<Eigen::Index>(r)] = value;
  }
  return labels;
}

Eigen::VectorXd class_weights(const Eigen::VectorXi& labels,
                              const Eigen::VectorXi& leaf_sizes) {
  Eigen::VectorXd weights(labels.size());
  for (Eigen::Index i = 0; i < labels.size(); ++i) {
    const int l = labels[i];
    if (l < 0 || l >= leaf_sizes.size())
      throw input_error("class_weights: label out of range");
    if (leaf_sizes[l] <= 0)
      throw input_error("class_weights: label refers to an empty leaf");
    weights[i] = 1.0 / static_cast<double>(leaf_sizes[l]);
  }
  return weights;
}

}  // namespace iifs
