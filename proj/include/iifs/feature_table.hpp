#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "iifs/csv.hpp"

namespace iifs {

enum class FeatureKind { numeric, binary, ordinal, nominal };
enum class FeatureRole { input, output };

const char* to_string(FeatureKind k);
const char* to_string(FeatureRole r);
FeatureKind feature_kind_from(const std::string& s);
FeatureRole feature_role_from(const std::string& s);

struct FeatureMeta {
  std::string name;
  FeatureKind kind = FeatureKind::numeric;
  FeatureRole role = FeatureRole::input;
  // non-empty on indicator columns produced by one-hot expansion of a
  // multi-level nominal feature; holds the original feature name
  std::string parent;

  bool is_indicator() const { return !parent.empty(); }
};

using BoolArray = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

// N records by D features with an explicit missingness mask. Absent cells
// hold NaN in `values`; `present` is authoritative. Immutable after
// construction and safe to share across threads.
class FeatureTable {
 public:
  FeatureTable(std::vector<FeatureMeta> metas, std::vector<std::string> record_ids,
               Eigen::MatrixXd values, BoolArray present);

  int n_records() const { return static_cast<int>(values_.rows()); }
  int n_features() const { return static_cast<int>(values_.cols()); }

  const std::vector<FeatureMeta>& metas() const { return metas_; }
  const FeatureMeta& meta(int j) const { return metas_[static_cast<std::size_t>(j)]; }
  const std::vector<std::string>& record_ids() const { return record_ids_; }
  const Eigen::MatrixXd& values() const { return values_; }
  const BoolArray& present() const { return present_; }

  int present_count(int j) const { return present_.col(j).count(); }
  std::optional<int> feature_index(const std::string& name) const;

 private:
  std::vector<FeatureMeta> metas_;
  std::vector<std::string> record_ids_;
  Eigen::MatrixXd values_;
  BoolArray present_;
};

// Tokens treated as missing, compared case-insensitively after trimming.
std::vector<std::string> default_missing_tokens();

// Builds a typed table from a data CSV (first column = record id) and a
// metadata CSV with columns name,kind,role. Multi-level nominal features are
// expanded into one indicator column per level, named "<name>=<level>".
FeatureTable build_feature_table(const CsvTable& data, const CsvTable& meta,
                                 const std::vector<std::string>& missing_tokens =
                                     default_missing_tokens());

FeatureTable load_table(const std::filesystem::path& data_path,
                        const std::filesystem::path& meta_path,
                        const std::vector<std::string>& missing_tokens =
                            default_missing_tokens());

}  // namespace iifs
