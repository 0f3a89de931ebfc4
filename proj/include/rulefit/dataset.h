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

#ifndef RULEFIT_DATASET_H_
#define RULEFIT_DATASET_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rulefit {

enum class ColumnKind { kNumeric, kCategorical };

enum class Task { kRegression, kBinaryClassification };

// Category id used for a level that was not seen when the column was built.
inline constexpr double kUnseenLevel = -1.0;

// A single predictor column. Categorical values are dense level ids stored as
// doubles (0 .. levels.size() - 1, or kUnseenLevel).
struct Column {
  std::string name;
  ColumnKind kind = ColumnKind::kNumeric;
  std::vector<double> values;
  std::vector<std::string> levels;

  bool is_categorical() const { return kind == ColumnKind::kCategorical; }
};

// Immutable column-major table of predictors plus a response.
class Dataset {
 public:
  Dataset() = default;

  // Validates lengths, finiteness, level ids and (for classification) that
  // every response is -1 or +1. Throws SchemaError / DomainError.
  Dataset(std::vector<Column> columns, std::vector<double> response,
          Task task);

  size_t num_rows() const { return num_rows_; }
  size_t num_columns() const { return columns_.size(); }
  Task task() const { return task_; }

  const Column& column(size_t j) const { return columns_[j]; }
  std::span<const Column> columns() const { return columns_; }

  double value(size_t row, size_t col) const {
    return columns_[col].values[row];
  }
  std::span<const double> response() const { return response_; }

  // Row i as a dense vector of predictor values.
  std::vector<double> Row(size_t i) const;

  std::optional<size_t> FindColumn(std::string_view name) const;

  // Same predictors with a replacement response.
  Dataset WithResponse(std::vector<double> response, Task task) const;

  // Rows selected (in the given order) from this dataset.
  Dataset Subset(std::span<const size_t> rows) const;

 private:
  std::vector<Column> columns_;
  std::vector<double> response_;
  size_t num_rows_ = 0;
  Task task_ = Task::kRegression;
};

// Column declarations used when parsing a CSV file.
struct CsvOptions {
  // Name of the response column. When empty the file has no response and the
  // dataset's response is all zeros.
  std::string target;
  std::vector<std::string> categorical;
  Task task = Task::kRegression;
  // If non-empty, the predictors must be exactly these columns (by name, in
  // any file order); categorical levels are mapped onto the given level
  // lists and unknown levels become kUnseenLevel. Used at prediction time.
  std::vector<Column> reference_schema;
};

// Parses a comma-delimited file with a header row. Supports RFC-4180 double
// quoting. Categorical levels are numbered in first-appearance order.
// Missing values (empty fields, NA, NaN) are rejected.
Dataset LoadCsv(const std::string& path, const CsvOptions& options);
Dataset ParseCsv(std::string_view text, const CsvOptions& options);

// Empirical quantile with linear interpolation between order statistics at
// one-based position 1 + (n - 1) q.
double Quantile(std::span<const double> values, double q);

// Per-column winsorization limits. Entries of categorical columns are unused
// (set to NaN).
struct WinsorLimits {
  double beta = 0.025;
  std::vector<double> lower;
  std::vector<double> upper;
};

WinsorLimits ComputeWinsorLimits(const Dataset& data, double beta);

inline double Winsorize(double x, double lower, double upper) {
  return x < lower ? lower : (x > upper ? upper : x);
}

inline double Winsorize(double x, const WinsorLimits& limits, size_t j) {
  return Winsorize(x, limits.lower[j], limits.upper[j]);
}

}  // namespace rulefit

#endif  // RULEFIT_DATASET_H_
