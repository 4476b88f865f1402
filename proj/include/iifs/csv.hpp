#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace iifs {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;  // every row has header.size() cells

  std::size_t n_rows() const { return rows.size(); }
  std::size_t n_cols() const { return header.size(); }
  // -1 when the column does not exist
  int column_index(const std::string& name) const;
};

// RFC 4180-style reader: quoted fields, doubled quotes, commas and newlines
// inside quotes. Rejects ragged rows with a line diagnostic.
CsvTable read_csv(const std::filesystem::path& path);
CsvTable parse_csv(const std::string& text, const std::string& origin = "<string>");

std::string csv_escape(const std::string& field);

}  // namespace iifs
