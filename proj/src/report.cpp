/**
 * Copyright 2026 The camaug Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "camaug/report.hpp"

#include <algorithm>

#include <json.hpp>

#include "camaug/error.hpp"
#include "camaug/indexer.hpp"

namespace camaug {

using json = nlohmann::ordered_json;

namespace {

std::string csv_field(const std::string &s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string md_cell(const std::string &s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += '\\';
    out += c;
  }
  return out;
}

// RFC 4180 records. Accepts CRLF or LF line ends.
std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"' && field.empty()) {
      quoted = true;
      field_started = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      field_started = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      row.push_back(std::move(field));
      field.clear();
      rows.push_back(std::move(row));
      row.clear();
      field_started = false;
    } else {
      field += c;
      field_started = true;
    }
  }
  if (quoted) throw ParseError("unterminated quoted CSV field", text.size());
  if (field_started || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::size_t CountTable::column_total(std::size_t column) const {
  std::size_t total = 0;
  for (const auto &row : cells) total += row.at(column);
  return total;
}

CountTable count_table(const std::vector<NamedDataset> &variants) {
  if (variants.empty()) throw ValidationError("report", "count table needs at least one variant");
  CountTable t;
  t.row_labels = variants.front().second->class_names;
  t.cells.assign(t.row_labels.size(), std::vector<std::size_t>(variants.size(), 0));
  for (std::size_t v = 0; v < variants.size(); ++v) {
    const auto &[name, d] = variants[v];
    if (d->class_names != t.row_labels) {
      throw ValidationError("report", "variant '" + name + "' has a different class list than '" +
                                          variants.front().first + "'");
    }
    t.column_labels.push_back(name);
    const auto counts = class_counts(*d);
    for (std::size_t c = 0; c < counts.size(); ++c) t.cells[c][v] = counts[c];
  }
  return t;
}

SizeHistogram size_histogram(const Dataset &d) {
  SizeHistogram h;
  h.class_names = d.class_names;
  h.counts.assign(d.class_names.size(), {0, 0, 0});
  for (const auto &ann : d.annotations) {
    if (ann.class_id < 0 || static_cast<std::size_t>(ann.class_id) >= h.counts.size()) continue;
    ++h.counts[ann.class_id][static_cast<std::size_t>(size_bucket(ann.bbox))];
  }
  return h;
}

CountTable to_table(const SizeHistogram &h) {
  CountTable t;
  t.row_labels = h.class_names;
  t.column_labels = {"small", "medium", "large"};
  for (const auto &c : h.counts) t.cells.push_back({c[0], c[1], c[2]});
  return t;
}

std::optional<ReportFormat> parse_report_format(std::string_view text) {
  if (text == "markdown" || text == "md") return ReportFormat::Markdown;
  if (text == "csv") return ReportFormat::Csv;
  if (text == "json") return ReportFormat::Json;
  return std::nullopt;
}

std::string emit(const CountTable &table, ReportFormat format) {
  std::string out;
  switch (format) {
    case ReportFormat::Markdown: {
      out += "| " + md_cell(table.corner) + " |";
      for (const auto &c : table.column_labels) out += " " + md_cell(c) + " |";
      out += "\n|---|";
      for (std::size_t i = 0; i < table.column_labels.size(); ++i) out += "---:|";
      out += "\n";
      for (std::size_t r = 0; r < table.row_labels.size(); ++r) {
        out += "| " + md_cell(table.row_labels[r]) + " |";
        for (std::size_t v : table.cells[r]) out += " " + std::to_string(v) + " |";
        out += "\n";
      }
      return out;
    }
    case ReportFormat::Csv: {
      out += csv_field(table.corner);
      for (const auto &c : table.column_labels) out += "," + csv_field(c);
      out += "\r\n";
      for (std::size_t r = 0; r < table.row_labels.size(); ++r) {
        out += csv_field(table.row_labels[r]);
        for (std::size_t v : table.cells[r]) out += "," + std::to_string(v);
        out += "\r\n";
      }
      return out;
    }
    case ReportFormat::Json: {
      json j;
      j["corner"] = table.corner;
      j["columns"] = table.column_labels;
      j["rows"] = table.row_labels;
      j["cells"] = table.cells;
      return j.dump(2) + "\n";
    }
  }
  return out;
}

std::string emit(const SizeHistogram &hist, ReportFormat format) {
  return emit(to_table(hist), format);
}

CountTable parse_table_csv(std::string_view text) {
  const auto rows = parse_csv(text);
  if (rows.empty() || rows.front().empty()) throw ParseError("CSV table has no header", 0);
  CountTable t;
  t.corner = rows.front().front();
  t.column_labels.assign(rows.front().begin() + 1, rows.front().end());
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto &row = rows[r];
    if (row.size() != t.column_labels.size() + 1) {
      throw ParseError("CSV row " + std::to_string(r) + " has the wrong number of fields", 0);
    }
    t.row_labels.push_back(row.front());
    std::vector<std::size_t> cells;
    for (std::size_t c = 1; c < row.size(); ++c) {
      try {
        std::size_t used = 0;
        cells.push_back(std::stoull(row[c], &used));
        if (used != row[c].size()) throw std::invalid_argument(row[c]);
      } catch (const std::logic_error &) {
        throw ParseError("CSV cell '" + row[c] + "' is not a count", 0);
      }
    }
    t.cells.push_back(std::move(cells));
  }
  return t;
}

CountTable parse_table_json(std::string_view text) {
  try {
    const json j = json::parse(text.begin(), text.end());
    CountTable t;
    t.corner = j.at("corner").get<std::string>();
    t.column_labels = j.at("columns").get<std::vector<std::string>>();
    t.row_labels = j.at("rows").get<std::vector<std::string>>();
    t.cells = j.at("cells").get<std::vector<std::vector<std::size_t>>>();
    return t;
  } catch (const json::parse_error &e) {
    throw ParseError(std::string("malformed table JSON: ") + e.what(), e.byte);
  } catch (const json::exception &e) {
    throw ParseError(std::string("table JSON field error: ") + e.what(), 0);
  }
}

}  // namespace camaug
