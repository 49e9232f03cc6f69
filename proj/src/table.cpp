#include "essaylens/table.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "essaylens/error.hpp"
#include "essaylens/textproc.hpp"

namespace essaylens {

std::string_view to_string(RowKind k) {
  switch (k) {
    case RowKind::Data: return "data";
    case RowKind::Section: return "section";
    case RowKind::Label: return "label";
    case RowKind::Blank: return "blank";
  }
  return "data";
}

std::size_t TextTable::columns() const { return headers.empty() ? 0 : headers.front().size(); }

TextTable& TextTable::data(std::vector<std::string> cells) {
  if (cells.size() != columns())
    throw InputError(fmt::format("table {}: row has {} cells, expected {}", id, cells.size(), columns()));
  rows.push_back({RowKind::Data, std::move(cells)});
  return *this;
}

TextTable& TextTable::section(std::string label) {
  rows.push_back({RowKind::Section, {std::move(label)}});
  return *this;
}

TextTable& TextTable::label(std::string label) {
  rows.push_back({RowKind::Label, {std::move(label)}});
  return *this;
}

TextTable& TextTable::blank() {
  rows.push_back({RowKind::Blank, {}});
  return *this;
}

namespace {

std::size_t width(std::string_view s) { return textproc::codepoint_length(s); }

std::string pad(std::string_view s, std::size_t w, bool left) {
  const auto n = width(s);
  const std::string fill(n < w ? w - n : 0, ' ');
  return left ? std::string(s) + fill : fill + std::string(s);
}

}  // namespace

std::string TextTable::render() const {
  const auto nc = columns();
  std::vector<std::size_t> w(nc, 0);
  for (const auto& h : headers)
    for (std::size_t c = 0; c < nc; ++c) w[c] = std::max(w[c], width(h[c]));
  for (const auto& r : rows)
    if (r.kind == RowKind::Data)
      for (std::size_t c = 0; c < nc; ++c) w[c] = std::max(w[c], width(r.cells[c]));
  std::size_t total = 0;
  for (auto x : w) total += x;
  total += nc > 0 ? 2 * (nc - 1) : 0;
  for (const auto& r : rows)
    if (r.kind != RowKind::Data && !r.cells.empty()) total = std::max(total, width(r.cells[0]));

  auto line = [&](const std::vector<std::string>& cells) {
    std::string s;
    for (std::size_t c = 0; c < nc; ++c) {
      if (c) s += "  ";
      s += pad(cells[c], w[c], c == 0);
    }
    while (!s.empty() && s.back() == ' ') s.pop_back();
    return s + "\n";
  };
  std::string out = title + "\n" + std::string(total, '=') + "\n";
  for (const auto& h : headers) out += line(h);
  out += std::string(total, '-') + "\n";
  for (const auto& r : rows) {
    if (r.kind == RowKind::Data)
      out += line(r.cells);
    else if (r.kind == RowKind::Blank)
      out += "\n";
    else
      out += r.cells[0] + "\n";
  }
  out += std::string(total, '-') + "\n";
  for (const auto& n : notes) out += n + "\n";
  return out;
}

nlohmann::ordered_json TextTable::to_json() const {
  nlohmann::ordered_json j;
  j["id"] = id;
  j["title"] = title;
  j["headers"] = headers;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : rows) j["rows"].push_back({{"kind", to_string(r.kind)}, {"cells", r.cells}});
  j["notes"] = notes;
  return j;
}

std::string TextTable::structure() const {
  std::string out = "title: " + title + "\n";
  for (const auto& h : headers) {
    out += "header:";
    for (std::size_t c = 0; c < h.size(); ++c) out += (c ? " | " : " ") + h[c];
    out += "\n";
  }
  for (const auto& r : rows) {
    out += fmt::format("{}: {}\n", to_string(r.kind), r.cells.empty() ? "" : r.cells[0]);
  }
  return out;
}

}  // namespace essaylens
