#include "iifs/feature_table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "iifs/error.hpp"

namespace iifs {

const char* to_string(FeatureKind k) {
  switch (k) {
    case FeatureKind::numeric: return "numeric";
    case FeatureKind::binary: return "binary";
    case FeatureKind::ordinal: return "ordinal";
    case FeatureKind::nominal: return "nominal";
  }
  return "?";
}

const char* to_string(FeatureRole r) {
  return r == FeatureRole::input ? "input" : "output";
}

FeatureKind feature_kind_from(const std::string& s) {
  if (s == "numeric") return FeatureKind::numeric;
  if (s == "binary") return FeatureKind::binary;
  if (s == "ordinal") return FeatureKind::ordinal;
  if (s == "nominal") return FeatureKind::nominal;
  throw input_error("unknown feature kind '" + s + "'");
}

FeatureRole feature_role_from(const std::string& s) {
  if (s == "input") return FeatureRole::input;
  if (s == "output") return FeatureRole::output;
  throw input_error("unknown feature role '" + s + "'");
}

FeatureTable::FeatureTable(std::vector<FeatureMeta> metas,
                           std::vector<std::string> record_ids,
                           Eigen::MatrixXd values, BoolArray present)
    : metas_(std::move(metas)),
      record_ids_(std::move(record_ids)),
      values_(std::move(values)),
      present_(std::move(present)) {
  const auto n = static_cast<Eigen::Index>(record_ids_.size());
  const auto d = static_cast<Eigen::Index>(metas_.size());
  if (values_.rows() != n || values_.cols() != d || present_.rows() != n ||
      present_.cols() != d) {
    throw input_error("FeatureTable: inconsistent dimensions");
  }
  std::unordered_set<std::string> names;
  for (const auto& m : metas_) {
    if (!names.insert(m.name).second)
      throw input_error("duplicate feature name '" + m.name + "'");
  }
  std::unordered_set<std::string> ids;
  for (const auto& id : record_ids_) {
    if (!ids.insert(id).second) throw input_error("duplicate record id '" + id + "'");
  }
  // absent cells must read as NaN
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      if (!present_(i, j)) values_(i, j) = nan;
}

std::optional<int> FeatureTable::feature_index(const std::string& name) const {
  for (std::size_t j = 0; j < metas_.size(); ++j)
    if (metas_[j].name == name) return static_cast<int>(j);
  return std::nullopt;
}

std::vector<std::string> default_missing_tokens() { return {"", "na", "nan"}; }

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

std::string lowered(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool parse_double(const std::string& token, double& out) {
  const char* begin = token.data();
  const char* end = begin + token.size();
  if (begin != end && *begin == '+') ++begin;
  const auto res = std::from_chars(begin, end, out);
  return res.ec == std::errc{} && res.ptr == end;
}

// numeric-aware level order so nominal codes like "10" do not sort before "2"
void sort_levels(std::vector<std::string>& levels) {
  std::vector<double> vals(levels.size());
  bool all_numeric = true;
  for (std::size_t i = 0; i < levels.size(); ++i)
    all_numeric = all_numeric && parse_double(levels[i], vals[i]);
  if (all_numeric) {
    std::vector<std::size_t> order(levels.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    std::vector<std::string> sorted;
    sorted.reserve(levels.size());
    for (auto i : order) sorted.push_back(levels[i]);
    levels = std::move(sorted);
  } else {
    std::sort(levels.begin(), levels.end());
  }
}

struct RawColumn {
  FeatureMeta meta;
  std::vector<std::string> cells;  // trimmed; empty-equivalent == missing
  std::vector<bool> present;
};

}  // namespace

FeatureTable build_feature_table(const CsvTable& data, const CsvTable& meta,
                                 const std::vector<std::string>& missing_tokens) {
  if (data.n_cols() < 2)
    throw input_error("data CSV needs an id column plus at least one feature");

  const int name_col = meta.column_index("name");
  const int kind_col = meta.column_index("kind");
  const int role_col = meta.column_index("role");
  if (name_col < 0 || kind_col < 0 || role_col < 0)
    throw input_error("metadata CSV must have columns name,kind,role");

  std::unordered_map<std::string, FeatureMeta> declared;
  for (const auto& row : meta.rows) {
    FeatureMeta m;
    m.name = trim(row[static_cast<std::size_t>(name_col)]);
    m.kind = feature_kind_from(trim(row[static_cast<std::size_t>(kind_col)]));
    m.role = feature_role_from(trim(row[static_cast<std::size_t>(role_col)]));
    if (!declared.emplace(m.name, m).second)
      throw input_error("duplicate metadata entry for feature '" + m.name + "'");
  }

  std::set<std::string> missing;
  for (const auto& t : missing_tokens) missing.insert(lowered(t));
  const auto is_missing = [&](const std::string& cell) {
    return missing.count(lowered(cell)) > 0;
  };

  const std::size_t n = data.n_rows();
  std::vector<std::string> record_ids;
  record_ids.reserve(n);
  for (const auto& row : data.rows) record_ids.push_back(row[0]);

  // every data column must be declared, and vice versa
  std::unordered_set<std::string> data_columns;
  for (std::size_t c = 1; c < data.n_cols(); ++c) data_columns.insert(data.header[c]);
  for (const auto& [name, m] : declared) {
    if (!data_columns.count(name))
      throw input_error("metadata declares unknown feature '" + name + "'");
  }

  std::vector<RawColumn> columns;
  for (std::size_t c = 1; c < data.n_cols(); ++c) {
    const std::string& name = data.header[c];
    const auto it = declared.find(name);
    if (it == declared.end())
      throw input_error("data column '" + name + "' missing from metadata");
    RawColumn col;
    col.meta = it->second;
    col.cells.reserve(n);
    col.present.reserve(n);
    for (std::size_t r = 0; r < n; ++r) {
      std::string cell = trim(data.rows[r][c]);
      const bool pres = !is_missing(cell);
      col.present.push_back(pres);
      col.cells.push_back(pres ? std::move(cell) : std::string{});
    }
    columns.push_back(std::move(col));
  }

  // expand / encode into the numeric matrix
  std::vector<FeatureMeta> metas;
  std::vector<std::vector<double>> value_cols;
  std::vector<std::vector<bool>> present_cols;

  for (auto& col : columns) {
    if (col.meta.kind != FeatureKind::nominal) {
      std::vector<double> vals(n, 0.0);
      for (std::size_t r = 0; r < n; ++r) {
        if (!col.present[r]) continue;
        if (!parse_double(col.cells[r], vals[r]))
          throw input_error("non-numeric value '" + col.cells[r] + "' in " +
                            to_string(col.meta.kind) + " column '" + col.meta.name +
                            "' (record " + record_ids[r] + ")");
      }
      metas.push_back(col.meta);
      value_cols.push_back(std::move(vals));
      present_cols.push_back(col.present);
      continue;
    }

    // nominal: collect present levels
    std::vector<std::string> levels;
    {
      std::set<std::string> seen;
      for (std::size_t r = 0; r < n; ++r)
        if (col.present[r] && seen.insert(col.cells[r]).second)
          levels.push_back(col.cells[r]);
    }
    sort_levels(levels);

    if (levels.size() <= 2) {
      // two-level nominal stays a single coded column
      std::vector<double> vals(n, 0.0);
      for (std::size_t r = 0; r < n; ++r) {
        if (!col.present[r]) continue;
        vals[r] = (levels.size() == 2 && col.cells[r] == levels[1]) ? 1.0 : 0.0;
      }
      metas.push_back(col.meta);
      value_cols.push_back(std::move(vals));
      present_cols.push_back(col.present);
    } else {
      for (const auto& level : levels) {
        FeatureMeta m;
        m.name = col.meta.name + "=" + level;
        m.kind = FeatureKind::binary;
        m.role = col.meta.role;
        m.parent = col.meta.name;
        std::vector<double> vals(n, 0.0);
        for (std::size_t r = 0; r < n; ++r)
          if (col.present[r]) vals[r] = col.cells[r] == level ? 1.0 : 0.0;
        metas.push_back(std::move(m));
        value_cols.push_back(std::move(vals));
        present_cols.push_back(col.present);
      }
    }
  }

  const auto d = static_cast<Eigen::Index>(metas.size());
  Eigen::MatrixXd values(static_cast<Eigen::Index>(n), d);
  BoolArray present(static_cast<Eigen::Index>(n), d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (std::size_t r = 0; r < n; ++r) {
      values(static_cast<Eigen::Index>(r), j) = value_cols[static_cast<std::size_t>(j)][r];
      present(static_cast<Eigen::Index>(r), j) = present_cols[static_cast<std::size_t>(j)][r];
    }
  }
  return FeatureTable(std::move(metas), std::move(record_ids), std::move(values),
                      std::move(present));
}

FeatureTable load_table(const std::filesystem::path& data_path,
                        const std::filesystem::path& meta_path,
                        const std::vector<std::string>& missing_tokens) {
  return build_feature_table(read_csv(data_path), read_csv(meta_path), missing_tokens);
}

}  // namespace iifs
