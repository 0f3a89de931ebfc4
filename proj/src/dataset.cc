/*
 * Copyright 2026 The RuleFit Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "rulefit/dataset.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "rulefit/errors.h"

namespace rulefit {
namespace {

struct Record {
  size_t line = 0;
  std::vector<std::string> fields;
};

// Splits text into records. Quoted fields may contain commas, newlines and
// doubled quotes.
std::vector<Record> SplitRecords(std::string_view text) {
  std::vector<Record> records;
  Record current;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  size_t line = 1;
  current.line = 1;

  auto end_field = [&] {
    current.fields.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    const bool blank = current.fields.size() == 1 && current.fields[0].empty();
    if (!blank) records.push_back(std::move(current));
    current = Record{};
    current.line = line;
  };

  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field_started && !field.empty()) {
          throw ParseError("row at line " + std::to_string(line) +
                           ": stray quote inside unquoted field");
        }
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        break;
      case '\n':
        ++line;
        end_record();
        break;
      default:
        field.push_back(c);
        field_started = true;
    }
  }
  if (in_quotes) {
    throw ParseError("row at line " + std::to_string(current.line) +
                     ": unterminated quoted field");
  }
  if (field_started || !field.empty() || !current.fields.empty()) {
    end_record();
  }
  return records;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

double ParseNumber(std::string_view token, size_t line,
                   const std::string& column) {
  const std::string_view t = Trim(token);
  double value = 0.0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (!t.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (t.empty() || ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw ParseError("row at line " + std::to_string(line) + ": column '" +
                     column + "': cannot parse '" + std::string(t) +
                     "' as a finite number");
  }
  return value;
}

}  // namespace

Dataset::Dataset(std::vector<Column> columns, std::vector<double> response,
                 Task task)
    : columns_(std::move(columns)),
      response_(std::move(response)),
      num_rows_(response_.size()),
      task_(task) {
  for (const Column& col : columns_) {
    if (col.values.size() != num_rows_) {
      throw SchemaError("column '" + col.name + "' has " +
                        std::to_string(col.values.size()) + " rows, expected " +
                        std::to_string(num_rows_));
    }
    for (double v : col.values) {
      if (col.is_categorical()) {
        const bool valid =
            v == kUnseenLevel ||
            (v >= 0 && v < static_cast<double>(col.levels.size()) &&
             v == std::floor(v));
        if (!valid) {
          throw SchemaError("column '" + col.name + "' has invalid level id");
        }
      } else if (!std::isfinite(v)) {
        throw DomainError("column '" + col.name + "' has a non-finite value");
      }
    }
  }
  for (double y : response_) {
    if (!std::isfinite(y)) throw DomainError("response has a non-finite value");
    if (task_ == Task::kBinaryClassification && y != 1.0 && y != -1.0) {
      throw DomainError("classification response must be -1 or +1");
    }
  }
}

std::vector<double> Dataset::Row(size_t i) const {
  std::vector<double> row(columns_.size());
  for (size_t j = 0; j < columns_.size(); ++j) row[j] = columns_[j].values[i];
  return row;
}

std::optional<size_t> Dataset::FindColumn(std::string_view name) const {
  for (size_t j = 0; j < columns_.size(); ++j) {
    if (columns_[j].name == name) return j;
  }
  return std::nullopt;
}

Dataset Dataset::WithResponse(std::vector<double> response, Task task) const {
  return Dataset(columns_, std::move(response), task);
}

Dataset Dataset::Subset(std::span<const size_t> rows) const {
  std::vector<Column> cols;
  cols.reserve(columns_.size());
  for (const Column& c : columns_) {
    Column sub{c.name, c.kind, {}, c.levels};
    sub.values.reserve(rows.size());
    for (size_t r : rows) sub.values.push_back(c.values[r]);
    cols.push_back(std::move(sub));
  }
  std::vector<double> y;
  y.reserve(rows.size());
  for (size_t r : rows) y.push_back(response_[r]);
  return Dataset(std::move(cols), std::move(y), task_);
}

Dataset ParseCsv(std::string_view text, const CsvOptions& options) {
  std::vector<Record> records = SplitRecords(text);
  if (records.empty()) throw ParseError("empty file: no header row");
  const std::vector<std::string>& header = records.front().fields;
  std::unordered_map<std::string, size_t> position;
  for (size_t k = 0; k < header.size(); ++k) {
    const std::string name(Trim(header[k]));
    if (!position.emplace(name, k).second) {
      throw SchemaError("duplicate column '" + name + "' in header");
    }
  }

  std::optional<size_t> target_pos;
  if (!options.target.empty()) {
    auto it = position.find(options.target);
    if (it != position.end()) {
      target_pos = it->second;
    } else if (options.reference_schema.empty()) {
      throw SchemaError("unknown column '" + options.target +
                        "' (response column not in header)");
    }
  }

  // Predictor layout: file position, declared kind, reference levels.
  struct Slot {
    size_t file_pos;
    Column column;
    std::unordered_map<std::string, size_t> level_index;
    bool frozen_levels = false;
  };
  std::vector<Slot> slots;
  if (options.reference_schema.empty()) {
    for (const std::string& name : options.categorical) {
      if (!position.contains(name)) {
        throw SchemaError("unknown column '" + name +
                          "' declared categorical");
      }
    }
    for (size_t k = 0; k < header.size(); ++k) {
      if (target_pos && k == *target_pos) continue;
      Slot slot;
      slot.file_pos = k;
      slot.column.name = std::string(Trim(header[k]));
      const bool cat = std::find(options.categorical.begin(),
                                 options.categorical.end(),
                                 slot.column.name) != options.categorical.end();
      slot.column.kind = cat ? ColumnKind::kCategorical : ColumnKind::kNumeric;
      slots.push_back(std::move(slot));
    }
  } else {
    for (const Column& ref : options.reference_schema) {
      auto it = position.find(ref.name);
      if (it == position.end()) {
        throw SchemaError("column '" + ref.name + "' required by the model " +
                          "is missing from the file");
      }
      Slot slot;
      slot.file_pos = it->second;
      slot.column = Column{ref.name, ref.kind, {}, ref.levels};
      for (size_t l = 0; l < ref.levels.size(); ++l) {
        slot.level_index.emplace(ref.levels[l], l);
      }
      slot.frozen_levels = true;
      slots.push_back(std::move(slot));
    }
    for (size_t k = 0; k < header.size(); ++k) {
      const std::string name(Trim(header[k]));
      const bool known =
          (target_pos && k == *target_pos) ||
          std::any_of(slots.begin(), slots.end(),
                      [&](const Slot& s) { return s.file_pos == k; });
      if (!known) throw SchemaError("unknown column '" + name + "'");
    }
  }

  std::vector<double> response;
  const size_t n_rows = records.size() - 1;
  response.reserve(n_rows);
  for (Slot& s : slots) s.column.values.reserve(n_rows);

  for (size_t r = 1; r < records.size(); ++r) {
    const Record& rec = records[r];
    if (rec.fields.size() != header.size()) {
      throw ParseError("row at line " + std::to_string(rec.line) + ": has " +
                       std::to_string(rec.fields.size()) + " fields, expected " +
                       std::to_string(header.size()));
    }
    for (Slot& s : slots) {
      const std::string_view token = Trim(rec.fields[s.file_pos]);
      if (s.column.is_categorical()) {
        if (token.empty()) {
          throw ParseError("row at line " + std::to_string(rec.line) +
                           ": missing value in column '" + s.column.name + "'");
        }
        const std::string key(token);
        auto it = s.level_index.find(key);
        if (it != s.level_index.end()) {
          s.column.values.push_back(static_cast<double>(it->second));
        } else if (s.frozen_levels) {
          s.column.values.push_back(kUnseenLevel);
        } else {
          const size_t id = s.column.levels.size();
          s.column.levels.push_back(key);
          s.level_index.emplace(key, id);
          s.column.values.push_back(static_cast<double>(id));
        }
      } else {
        s.column.values.push_back(ParseNumber(token, rec.line, s.column.name));
      }
    }
    if (target_pos) {
      response.push_back(
          ParseNumber(rec.fields[*target_pos], rec.line, options.target));
    } else {
      response.push_back(0.0);
    }
  }

  std::vector<Column> columns;
  columns.reserve(slots.size());
  for (Slot& s : slots) columns.push_back(std::move(s.column));
  const Task task = target_pos ? options.task : Task::kRegression;
  return Dataset(std::move(columns), std::move(response), task);
}

Dataset LoadCsv(const std::string& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseCsv(buffer.str(), options);
}

double Quantile(std::span<const double> values, double q) {
  if (values.empty()) throw DomainError("quantile of an empty sequence");
  if (!(q >= 0.0 && q <= 1.0)) throw DomainError("quantile level outside [0, 1]");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const size_t lo = static_cast<size_t>(std::floor(pos));
  const size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  if (frac == 0.0) return sorted[lo];
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

WinsorLimits ComputeWinsorLimits(const Dataset& data, double beta) {
  if (!(beta >= 0.0 && beta < 0.5)) {
    throw DomainError("winsorization fraction must lie in [0, 0.5)");
  }
  WinsorLimits limits;
  limits.beta = beta;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  limits.lower.assign(data.num_columns(), nan);
  limits.upper.assign(data.num_columns(), nan);
  for (size_t j = 0; j < data.num_columns(); ++j) {
    const Column& col = data.column(j);
    if (col.is_categorical() || col.values.empty()) continue;
    limits.lower[j] = Quantile(col.values, beta);
    limits.upper[j] = Quantile(col.values, 1.0 - beta);
  }
  return limits;
}

}  // namespace rulefit
