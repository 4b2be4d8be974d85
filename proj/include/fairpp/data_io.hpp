// Copyright 2026 The fairpp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Canonical CSV ingestion and the random train/test split.
//
// A dataset is a CSV with a header row holding at least a group column and
// a score column (or a label column used as the score, for the setup where
// the regressor is the identity on the target). Rows with a missing score or
// label (empty, "NA" or "NaN") are dropped; anything else that fails to
// parse is an error naming the row and column.

#ifndef FAIRPP_DATA_IO_HPP_
#define FAIRPP_DATA_IO_HPP_

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fairpp/errors.hpp"
#include "fairpp/random.hpp"
#include "fairpp/samples.hpp"
#include "json.hpp"

namespace fairpp {

enum class Normalization { kNone, kAffineToUnit };

struct DatasetSchema {
  std::string group_column = "group";
  std::string score_column = "score";
  std::optional<std::string> label_column;
  bool use_label_as_score = false;
  double lower = 0.0;
  double upper = 1.0;
  Normalization normalization = Normalization::kNone;
  char delimiter = ',';

  void Validate() const {
    if (!(lower < upper) || !std::isfinite(lower) || !std::isfinite(upper)) {
      throw Error(ErrorKind::kInvalidInterval, "schema interval is empty");
    }
    if (use_label_as_score && !label_column) {
      throw Error(ErrorKind::kInvalidParameter, "use_label_as_score requires a label column");
    }
    if (group_column.empty()) throw Error(ErrorKind::kInvalidParameter, "group column name is empty");
    if (!use_label_as_score && (score_column.empty() || score_column == group_column)) {
      throw Error(ErrorKind::kInvalidParameter, "score column must be named and distinct from the group column");
    }
    if (label_column && (*label_column == group_column ||
                         (!use_label_as_score && *label_column == score_column))) {
      throw Error(ErrorKind::kInvalidParameter, "label column must be distinct from the other columns");
    }
  }

  // The affine map applied to scores and labels on load.
  AffineScale Scale() const {
    if (normalization == Normalization::kAffineToUnit) return {lower, upper - lower};
    return {};
  }

  // Interval in internal units.
  std::pair<double, double> InternalInterval() const {
    const AffineScale s = Scale();
    return {s.ToInternal(lower), s.ToInternal(upper)};
  }

  static DatasetSchema FromJson(const nlohmann::json& doc) {
    DatasetSchema schema;
    try {
      schema.group_column = doc.value("group", schema.group_column);
      schema.use_label_as_score = doc.value("use_label_as_score", false);
      if (doc.contains("score") && !doc.at("score").is_null()) {
        schema.score_column = doc.at("score").get<std::string>();
      }
      if (doc.contains("label") && !doc.at("label").is_null()) {
        schema.label_column = doc.at("label").get<std::string>();
      }
      if (doc.contains("interval")) {
        schema.lower = doc.at("interval").at(0).get<double>();
        schema.upper = doc.at("interval").at(1).get<double>();
      }
      const std::string norm = doc.value("normalization", std::string("none"));
      if (norm == "affine-to-unit") {
        schema.normalization = Normalization::kAffineToUnit;
      } else if (norm != "none") {
        throw Error(ErrorKind::kInvalidParameter, "unknown normalization '" + norm + "'");
      }
      const std::string delim = doc.value("delimiter", std::string(","));
      if (delim.size() != 1) throw Error(ErrorKind::kInvalidParameter, "delimiter must be one character");
      schema.delimiter = delim[0];
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::kInvalidParameter, std::string("malformed schema: ") + e.what());
    }
    schema.Validate();
    return schema;
  }

  static DatasetSchema Load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::kInvalidParameter, "cannot read schema file " + path);
    nlohmann::json doc;
    try {
      in >> doc;
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::kInvalidParameter, "schema file " + path + ": " + e.what());
    }
    return FromJson(doc);
  }

  nlohmann::json ToJson() const {
    nlohmann::json doc;
    doc["group"] = group_column;
    doc["score"] = use_label_as_score ? nlohmann::json(nullptr) : nlohmann::json(score_column);
    doc["label"] = label_column ? nlohmann::json(*label_column) : nlohmann::json(nullptr);
    doc["use_label_as_score"] = use_label_as_score;
    doc["interval"] = {lower, upper};
    doc["normalization"] = normalization == Normalization::kAffineToUnit ? "affine-to-unit" : "none";
    doc["delimiter"] = std::string(1, delimiter);
    return doc;
  }
};

struct LoadedDataset {
  GroupedSamples samples;  // scores and labels in internal units
  AffineScale scale;
  std::size_t dropped_rows = 0;
};

namespace internal {

// Splits one CSV record. Double quotes enclose fields; "" inside a quoted
// field is a literal quote.
inline std::vector<std::string> SplitCsvLine(std::string_view line, char delimiter) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          fields.back() += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == delimiter) {
      fields.emplace_back();
    } else if (c != '\r') {
      fields.back() += c;
    }
  }
  return fields;
}

inline std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

inline bool IsMissing(std::string_view cell) {
  cell = Trim(cell);
  return cell.empty() || cell == "NA" || cell == "NaN" || cell == "nan" || cell == "?";
}

inline double ParseCell(std::string_view cell, std::size_t line_no, const std::string& column) {
  cell = Trim(cell);
  double value = 0.0;
  const char* end = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(cell.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw Error(ErrorKind::kUnparseableCell, "line " + std::to_string(line_no) + ", column '" +
                                                 column + "': cannot parse '" + std::string(cell) + "'");
  }
  return value;
}

}  // namespace internal

inline LoadedDataset LoadCsv(std::istream& in, const DatasetSchema& schema,
                             const std::string& source = "<stream>") {
  schema.Validate();
  std::string line;
  std::size_t line_no = 0;
  // Header: first line that is neither blank nor a '#' comment.
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (internal::Trim(line).empty() || line[0] == '#') continue;
    header = internal::SplitCsvLine(line, schema.delimiter);
    break;
  }
  if (header.empty()) throw Error(ErrorKind::kEmptyFile, source + " has no header row");
  if (!header.empty() && header[0].size() >= 3 && header[0].compare(0, 3, "\xEF\xBB\xBF") == 0) {
    header[0].erase(0, 3);
  }
  auto column = [&](const std::string& name) -> std::size_t {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (internal::Trim(header[c]) == name) return c;
    }
    throw Error(ErrorKind::kMissingColumn, source + " has no column '" + name + "'");
  };
  const std::size_t group_col = column(schema.group_column);
  const std::optional<std::size_t> label_col =
      schema.label_column ? std::optional<std::size_t>(column(*schema.label_column)) : std::nullopt;
  const std::size_t score_col = schema.use_label_as_score ? *label_col : column(schema.score_column);
  const std::string score_name = schema.use_label_as_score ? *schema.label_column : schema.score_column;

  LoadedDataset out;
  out.scale = schema.Scale();
  while (std::getline(in, line)) {
    ++line_no;
    if (internal::Trim(line).empty() || line[0] == '#') continue;
    const auto cells = internal::SplitCsvLine(line, schema.delimiter);
    if (cells.size() != header.size()) {
      throw Error(ErrorKind::kUnparseableCell, source + " line " + std::to_string(line_no) + " has " +
                                                   std::to_string(cells.size()) + " fields, header has " +
                                                   std::to_string(header.size()));
    }
    const std::string_view group = internal::Trim(cells[group_col]);
    if (group.empty() || internal::IsMissing(cells[score_col]) ||
        (label_col && internal::IsMissing(cells[*label_col]))) {
      ++out.dropped_rows;
      continue;
    }
    Sample s;
    s.group = out.samples.InternGroup(group);
    s.score = out.scale.ToInternal(internal::ParseCell(cells[score_col], line_no, score_name));
    if (label_col) {
      s.label = out.scale.ToInternal(internal::ParseCell(cells[*label_col], line_no, *schema.label_column));
    }
    out.samples.rows.push_back(s);
  }
  if (out.samples.empty()) throw Error(ErrorKind::kEmptyFile, source + " has no data rows");
  return out;
}

inline LoadedDataset LoadCsv(const std::string& path, const DatasetSchema& schema) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kEmptyFile, "cannot open " + path);
  return LoadCsv(in, schema, path);
}

// Uniform random split: the first ceil(ratio * n) rows of a seeded
// Fisher-Yates shuffle form the training set. Both halves keep the full
// group label list so group indices agree.
inline std::pair<GroupedSamples, GroupedSamples> SplitTrainTest(const GroupedSamples& samples,
                                                                double ratio, std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw Error(ErrorKind::kInvalidParameter, "split ratio must lie in (0, 1)");
  }
  const std::size_t n = samples.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  RandomStream rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.UniformIndex(i));
    std::swap(order[i - 1], order[j]);
  }
  const auto n_train = static_cast<std::size_t>(std::ceil(ratio * static_cast<double>(n) - 1e-9));
  GroupedSamples train{samples.groups, {}};
  GroupedSamples test{samples.groups, {}};
  train.rows.reserve(n_train);
  test.rows.reserve(n - n_train);
  for (std::size_t i = 0; i < n; ++i) {
    (i < n_train ? train : test).rows.push_back(samples.rows[order[i]]);
  }
  return {std::move(train), std::move(test)};
}

}  // namespace fairpp

#endif  // FAIRPP_DATA_IO_HPP_
