#pragma once

// Ingestion of bipartite networks from incidence matrices and edge lists.

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "netrobust/error.hpp"
#include "netrobust/graph.hpp"

namespace netrobust {

namespace text {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

/// Splits one CSV record on `sep`. Double-quoted fields may contain the
/// separator and "" escapes; fields are trimmed.
inline std::vector<std::string> split_record(std::string_view line, char sep = ',') {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == sep) {
      fields.emplace_back(trim(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  fields.emplace_back(trim(field));
  return fields;
}

/// Splits text into lines, dropping '\r' before '\n'.
inline std::vector<std::string_view> lines(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    out.push_back(line);
    if (end == text.size()) break;
    start = end + 1;
  }
  while (!out.empty() && trim(out.back()).empty()) out.pop_back();
  return out;
}

inline std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (s.empty() || ec != std::errc{} || ptr != end || !std::isfinite(value)) return std::nullopt;
  return value;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace text

struct IncidenceHeaders {
  bool row_header = false;
  bool col_header = false;
};

/// Guesses header presence: a first line with any non-numeric cell after the
/// first is a column header; a non-numeric leading cell on any later line marks
/// a row-label column. All-numeric labels cannot be detected.
inline IncidenceHeaders detect_incidence_headers(std::string_view csv) {
  IncidenceHeaders h;
  const auto rows = text::lines(csv);
  if (rows.empty()) return h;
  const auto first = text::split_record(rows.front());
  for (std::size_t j = 1; j < first.size(); ++j)
    if (!text::parse_number(first[j])) h.col_header = true;
  if (!h.col_header && !first.empty() && !text::parse_number(first[0])) h.row_header = true;
  for (std::size_t i = h.col_header ? 1 : 0; i < rows.size() && !h.row_header; ++i) {
    const auto cells = text::split_record(rows[i]);
    if (!cells.empty() && !text::parse_number(cells[0])) h.row_header = true;
  }
  return h;
}

/// Incidence matrix: one row per row-partition species, one column per
/// column-partition species. Cells > 0 become edges; weights are dropped.
inline BipartiteGraph parse_incidence_csv(std::string_view csv, bool has_row_header,
                                          bool has_col_header) {
  const auto lines = text::lines(csv);
  std::vector<std::string> row_labels, col_labels;
  std::vector<BipartiteEdge> edges;
  std::size_t width = 0;
  bool have_width = false;
  std::size_t line_no = 0;
  for (const auto line : lines) {
    ++line_no;
    auto cells = text::split_record(line);
    if (has_col_header && line_no == 1) {
      const std::size_t skip = has_row_header ? 1 : 0;
      for (std::size_t j = skip; j < cells.size(); ++j) col_labels.push_back(cells[j]);
      width = col_labels.size();
      have_width = true;
      continue;
    }
    if (text::trim(line).empty()) throw ParseError(line_no, "empty row");
    std::string label;
    std::size_t first_value = 0;
    if (has_row_header) {
      label = cells[0];
      first_value = 1;
    }
    const std::size_t values = cells.size() - first_value;
    if (!have_width) {
      width = values;
      have_width = true;
    } else if (values != width) {
      throw ParseError(line_no, "expected " + std::to_string(width) + " values, found " +
                                    std::to_string(values));
    }
    const auto row = static_cast<NodeId>(row_labels.size());
    for (std::size_t j = 0; j < values; ++j) {
      const auto cell = text::parse_number(cells[first_value + j]);
      if (!cell) throw ParseError(line_no, "non-numeric cell '" + cells[first_value + j] + "'");
      if (*cell < 0) throw ParseError(line_no, "negative cell '" + cells[first_value + j] + "'");
      if (*cell > 0) edges.push_back({row, static_cast<NodeId>(j)});
    }
    row_labels.push_back(label.empty() ? "r" + std::to_string(row) : label);
  }
  if (row_labels.empty() || width == 0)
    throw EmptyNetworkError("incidence matrix has no rows or no columns");
  if (col_labels.empty())
    for (std::size_t j = 0; j < width; ++j) col_labels.push_back("c" + std::to_string(j));
  return BipartiteGraph(std::move(row_labels), std::move(col_labels), std::move(edges));
}

inline BipartiteGraph parse_incidence_csv(std::string_view csv) {
  const auto h = detect_incidence_headers(csv);
  return parse_incidence_csv(csv, h.row_header, h.col_header);
}

/// Lines of "row<sep>col[<sep>weight]", sep is a tab when the line has one,
/// otherwise a comma. '#' lines and blank lines are skipped. Labels are
/// interned per partition in first-appearance order.
inline BipartiteGraph parse_edge_list(std::string_view input) {
  std::vector<std::string> rows, cols;
  std::unordered_map<std::string, NodeId> row_index, col_index;
  std::vector<BipartiteEdge> edges;
  auto intern = [](std::vector<std::string>& labels, std::unordered_map<std::string, NodeId>& index,
                   const std::string& name) {
    auto [it, inserted] = index.try_emplace(name, static_cast<NodeId>(labels.size()));
    if (inserted) labels.push_back(name);
    return it->second;
  };
  std::size_t line_no = 0;
  for (const auto line : text::lines(input)) {
    ++line_no;
    const auto body = text::trim(line);
    if (body.empty() || body.front() == '#') continue;
    const char sep = body.find('\t') != std::string_view::npos ? '\t' : ',';
    const auto fields = text::split_record(body, sep);
    if (fields.size() != 2 && fields.size() != 3)
      throw ParseError(line_no, "expected 2 or 3 fields, found " + std::to_string(fields.size()));
    if (fields[0].empty() || fields[1].empty()) throw ParseError(line_no, "empty node name");
    if (fields.size() == 3 && !text::parse_number(fields[2]))
      throw ParseError(line_no, "non-numeric weight '" + fields[2] + "'");
    const NodeId r = intern(rows, row_index, fields[0]);
    const NodeId c = intern(cols, col_index, fields[1]);
    edges.push_back({r, c});
  }
  return BipartiteGraph(std::move(rows), std::move(cols), std::move(edges));
}

/// Inverse of parse_edge_list for the edge set (isolated nodes are not listed).
inline std::string to_edge_list_text(const BipartiteGraph& g) {
  std::string out;
  for (const auto& e : g.edges()) {
    out += g.row_labels()[e.row];
    out += ',';
    out += g.col_labels()[e.col];
    out += '\n';
  }
  return out;
}

enum class NetworkFormat { IncidenceCSV, EdgeList };

inline bool parse_network_format(std::string_view text, NetworkFormat& out) {
  std::string key;
  for (char c : text)
    if (c != '-' && c != '_') key.push_back(static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c));
  if (key == "incidence" || key == "incidencecsv" || key == "matrix") out = NetworkFormat::IncidenceCSV;
  else if (key == "edgelist" || key == "edges") out = NetworkFormat::EdgeList;
  else return false;
  return true;
}

inline std::string_view to_string(NetworkFormat f) {
  return f == NetworkFormat::IncidenceCSV ? "IncidenceCSV" : "EdgeList";
}

/// `.csv` files are incidence matrices; anything else is an edge list.
inline NetworkFormat guess_format(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? NetworkFormat::IncidenceCSV : NetworkFormat::EdgeList;
}

inline BipartiteGraph load_network(const std::filesystem::path& path, NetworkFormat format,
                                   std::optional<IncidenceHeaders> headers = std::nullopt) {
  const std::string content = text::read_file(path);
  if (format == NetworkFormat::EdgeList) return parse_edge_list(content);
  const auto h = headers.value_or(detect_incidence_headers(content));
  return parse_incidence_csv(content, h.row_header, h.col_header);
}

}  // namespace netrobust
