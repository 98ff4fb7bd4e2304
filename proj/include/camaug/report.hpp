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

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "camaug/annotations.hpp"

namespace camaug {

/// Rows are classes, columns are dataset variants (or size buckets).
struct CountTable {
  std::string corner = "class";
  std::vector<std::string> row_labels;
  std::vector<std::string> column_labels;
  std::vector<std::vector<std::size_t>> cells;  // [row][column]

  std::size_t column_total(std::size_t column) const;
  friend bool operator==(const CountTable &, const CountTable &) = default;
};

struct SizeHistogram {
  std::vector<std::string> class_names;
  std::vector<std::array<std::size_t, 3>> counts;  // small, medium, large per class
};

using NamedDataset = std::pair<std::string, const Dataset *>;

/// Exact per-class tallies, one column per variant in the given order.
/// Throws ValidationError when variants disagree on class names.
CountTable count_table(const std::vector<NamedDataset> &variants);

SizeHistogram size_histogram(const Dataset &d);
CountTable to_table(const SizeHistogram &h);

enum class ReportFormat { Markdown, Csv, Json };

std::optional<ReportFormat> parse_report_format(std::string_view text);

std::string emit(const CountTable &table, ReportFormat format);
std::string emit(const SizeHistogram &hist, ReportFormat format);

/// Inverse of emit for CSV and JSON. Throws ParseError on malformed text.
CountTable parse_table_csv(std::string_view text);
CountTable parse_table_json(std::string_view text);

}  // namespace camaug
