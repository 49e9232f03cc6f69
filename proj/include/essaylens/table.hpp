#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace essaylens {

enum class RowKind { Data, Section, Label, Blank };

std::string_view to_string(RowKind k);

struct TableRow {
  RowKind kind = RowKind::Data;
  std::vector<std::string> cells;  ///< Section/Label rows carry only the first cell
};

/// A report table: fixed-width text, JSON, and a value-free structure
/// summary for golden comparisons.
struct TextTable {
  std::string id;
  std::string title;
  std::vector<std::vector<std::string>> headers;  ///< one or more header lines
  std::vector<TableRow> rows;
  std::vector<std::string> notes;

  std::size_t columns() const;
  TextTable& data(std::vector<std::string> cells);
  TextTable& section(std::string label);
  TextTable& label(std::string label);
  TextTable& blank();

  std::string render() const;
  nlohmann::ordered_json to_json() const;
  /// Title, header lines, and (kind, first cell) per row.
  std::string structure() const;
};

}  // namespace essaylens
