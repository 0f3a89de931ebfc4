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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rulefit/errors.h"
#include "rulefit/random.h"

namespace rulefit {
namespace {

TEST(ParseCsvTest, ThreeRowFile) {
  CsvOptions opt;
  opt.target = "y";
  const Dataset d = ParseCsv("x1,y\n1,2\n3,4\n5,6\n", opt);
  EXPECT_EQ(d.num_rows(), 3u);
  EXPECT_EQ(d.num_columns(), 1u);
  EXPECT_DOUBLE_EQ(d.value(2, 0), 5.0);
  EXPECT_DOUBLE_EQ(d.response()[1], 4.0);
}

TEST(ParseCsvTest, QuotedHeaderAndFields) {
  CsvOptions opt;
  opt.target = "y";
  opt.categorical = {"c"};
  const Dataset d = ParseCsv("\"x\",\"c\",\"y\"\n1,\"a,b\",2\n2,z,3\n3,\"a,b\",4\n", opt);
  ASSERT_EQ(d.num_columns(), 2u);
  EXPECT_EQ(d.column(1).levels, (std::vector<std::string>{"a,b", "z"}));
  EXPECT_DOUBLE_EQ(d.value(2, 1), 0.0);
}

TEST(ParseCsvTest, LevelsInFirstAppearanceOrder) {
  CsvOptions opt;
  opt.target = "y";
  opt.categorical = {"c"};
  const Dataset d = ParseCsv("c,y\nb,1\na,2\nb,3\nc,4\n", opt);
  EXPECT_EQ(d.column(0).levels, (std::vector<std::string>{"b", "a", "c"}));
  EXPECT_EQ(d.column(0).values, (std::vector<double>{0, 1, 0, 2}));
}

TEST(ParseCsvTest, NonNumericTokenNamesTheLine) {
  CsvOptions opt;
  opt.target = "y";
  try {
    ParseCsv("x,y\n1,2\nabc,3\n", opt);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(ParseCsvTest, MissingValuesRejected) {
  CsvOptions opt;
  opt.target = "y";
  EXPECT_THROW(ParseCsv("x,y\n1,2\n,3\n", opt), ParseError);
  EXPECT_THROW(ParseCsv("x,y\nNA,2\n", opt), ParseError);
}

TEST(ParseCsvTest, UnknownTargetIsSchemaError) {
  CsvOptions opt;
  opt.target = "nope";
  EXPECT_THROW(ParseCsv("x,y\n1,2\n", opt), SchemaError);
}

TEST(ParseCsvTest, UnknownCategoricalIsSchemaError) {
  CsvOptions opt;
  opt.target = "y";
  opt.categorical = {"zz"};
  EXPECT_THROW(ParseCsv("x,y\n1,2\n", opt), SchemaError);
}

TEST(ParseCsvTest, ReferenceSchemaMapsLevelsAndUnseen) {
  CsvOptions train_opt;
  train_opt.target = "y";
  train_opt.categorical = {"c"};
  const Dataset train = ParseCsv("c,x,y\na,1,1\nb,2,2\n", train_opt);
  CsvOptions opt;
  opt.target = "y";
  opt.reference_schema.assign(train.columns().begin(), train.columns().end());
  // Column order in the file differs and the target is absent.
  const Dataset test = ParseCsv("x,c\n5,b\n6,q\n", opt);
  EXPECT_EQ(test.column(0).name, "c");
  EXPECT_DOUBLE_EQ(test.value(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(test.value(1, 0), kUnseenLevel);
  EXPECT_DOUBLE_EQ(test.value(1, 1), 6.0);
}

TEST(ParseCsvTest, ClassificationLabelsValidated) {
  CsvOptions opt;
  opt.target = "y";
  opt.task = Task::kBinaryClassification;
  EXPECT_NO_THROW(ParseCsv("x,y\n1,1\n2,-1\n", opt));
  EXPECT_THROW(ParseCsv("x,y\n1,1\n2,0\n", opt), DomainError);
}

TEST(QuantileTest, Singleton) {
  const std::vector<double> v = {5.0};
  for (double q : {0.0, 0.3, 1.0}) EXPECT_DOUBLE_EQ(Quantile(v, q), 5.0);
}

TEST(QuantileTest, MatchesSortInterpolationOracle) {
  std::vector<double> v(100);
  std::iota(v.begin(), v.end(), 1.0);
  Rng rng(3);
  rng.Shuffle(std::span<double>(v));
  EXPECT_DOUBLE_EQ(Quantile(v, 0.5), 50.5);
  EXPECT_DOUBLE_EQ(Quantile(v, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(Quantile(v, 1.0), 100.0);
  // Position 1 + 99 * 0.9 = 90.1 -> 90 + 0.1.
  EXPECT_NEAR(Quantile(v, 0.9), 90.1, 1e-12);
}

TEST(QuantileTest, EmptyIsDomainError) {
  EXPECT_THROW(Quantile(std::vector<double>{}, 0.5), DomainError);
}

TEST(QuantileTest, WithinRangeProperty) {
  Rng rng(9);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> v(1 + rng.UniformInt(30));
    for (double& x : v) x = rng.Normal();
    const double q = rng.Uniform();
    const double value = Quantile(v, q);
    EXPECT_GE(value, *std::min_element(v.begin(), v.end()));
    EXPECT_LE(value, *std::max_element(v.begin(), v.end()));
  }
}

Dataset OneColumn(std::vector<double> x) {
  Column c;
  c.name = "x";
  c.values = std::move(x);
  std::vector<double> y(c.values.size(), 0.0);
  return Dataset({c}, y, Task::kRegression);
}

TEST(WinsorTest, BetaZeroIsMinMax) {
  const Dataset d = OneColumn({3, -1, 7, 2});
  const WinsorLimits w = ComputeWinsorLimits(d, 0.0);
  EXPECT_DOUBLE_EQ(w.lower[0], -1.0);
  EXPECT_DOUBLE_EQ(w.upper[0], 7.0);
  for (double x : d.column(0).values) EXPECT_DOUBLE_EQ(Winsorize(x, w, 0), x);
}

TEST(WinsorTest, GridLimitsFollowQuantileConvention) {
  std::vector<double> grid;
  for (int k = 0; k < 10; ++k) grid.push_back(k / 10.0);
  const WinsorLimits w = ComputeWinsorLimits(OneColumn(grid), 0.1);
  EXPECT_NEAR(w.lower[0], Quantile(grid, 0.1), 1e-15);
  EXPECT_NEAR(w.lower[0], 0.09, 1e-12);
  EXPECT_NEAR(w.upper[0], 0.81, 1e-12);
}

TEST(WinsorTest, ConstantColumn) {
  const WinsorLimits w = ComputeWinsorLimits(OneColumn({4, 4, 4}), 0.025);
  EXPECT_DOUBLE_EQ(w.lower[0], 4.0);
  EXPECT_DOUBLE_EQ(w.upper[0], 4.0);
}

TEST(WinsorTest, ClipIdempotentMonotone) {
  EXPECT_DOUBLE_EQ(Winsorize(0.5, 0.0, 1.0), 0.5);
  EXPECT_DOUBLE_EQ(Winsorize(-1.0, 0.0, 1.0), 0.0);
  Rng rng(1);
  double prev = -1e300;
  for (int i = -50; i <= 50; ++i) {
    const double x = i / 10.0;
    const double w = Winsorize(x, -1.0, 2.0);
    EXPECT_DOUBLE_EQ(Winsorize(w, -1.0, 2.0), w);
    EXPECT_GE(w, prev);
    prev = w;
  }
}

TEST(WinsorTest, BetaOutOfRangeRejected) {
  EXPECT_THROW(ComputeWinsorLimits(OneColumn({1, 2}), 0.5), std::exception);
}

TEST(DatasetTest, RejectsMismatchedLengths) {
  Column c;
  c.name = "x";
  c.values = {1, 2};
  EXPECT_THROW(Dataset({c}, {1.0}, Task::kRegression), SchemaError);
}

TEST(DatasetTest, SubsetAndWithResponse) {
  const Dataset d = OneColumn({1, 2, 3, 4});
  const std::vector<size_t> rows = {3, 1};
  const Dataset s = d.Subset(rows);
  EXPECT_EQ(s.column(0).values, (std::vector<double>{4, 2}));
  const Dataset r = d.WithResponse({1, -1, 1, -1}, Task::kBinaryClassification);
  EXPECT_EQ(r.task(), Task::kBinaryClassification);
  EXPECT_DOUBLE_EQ(r.response()[1], -1.0);
}

}  // namespace
}  // namespace rulefit
