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

#include "fairpp/data_io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "gtest/gtest.h"

namespace fairpp {
namespace {

LoadedDataset LoadString(const std::string& text, const DatasetSchema& schema = {}) {
  std::istringstream in(text);
  return LoadCsv(in, schema, "test.csv");
}

ErrorKind KindOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::kInvalidParameter;
}

TEST(LoadCsvTest, ToyFile) {
  const auto d = LoadString("group,score\nA,0.1\nB,0.5\nA,0.9\n");
  EXPECT_EQ(d.samples.num_groups(), 2u);
  EXPECT_EQ(d.samples.size(), 3u);
  EXPECT_EQ(d.samples.groups, (std::vector<std::string>{"A", "B"}));
  EXPECT_EQ(d.samples.rows[1].group, 1u);
  EXPECT_EQ(d.samples.rows[2].score, 0.9);
  EXPECT_FALSE(d.samples.rows[0].label.has_value());
}

TEST(LoadCsvTest, LabelAsScore) {
  DatasetSchema schema;
  schema.label_column = "gpa";
  schema.use_label_as_score = true;
  schema.group_column = "race";
  const auto d = LoadString("race,gpa,other\nw,3.2,x\nb,2.5,y\n", schema);
  EXPECT_EQ(d.samples.rows[0].score, 3.2);
  EXPECT_EQ(*d.samples.rows[0].label, 3.2);
}

TEST(LoadCsvTest, QuotedFieldsDelimiterCommentsAndBom) {
  DatasetSchema schema;
  schema.delimiter = ';';
  const auto d = LoadString("# exported\n\xEF\xBB\xBFgroup;score\n\"x;y\";0.5\n\"say \"\"hi\"\"\";0.25\r\n", schema);
  EXPECT_EQ(d.samples.groups, (std::vector<std::string>{"x;y", "say \"hi\""}));
  EXPECT_EQ(d.samples.rows[1].score, 0.25);
}

TEST(LoadCsvTest, MissingColumn) {
  EXPECT_EQ(KindOf([] { LoadString("group,value\nA,1\n"); }), ErrorKind::kMissingColumn);
}

TEST(LoadCsvTest, UnparseableCellNamesLineAndColumn) {
  try {
    LoadString("group,score\nA,0.1\nB,zero\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kUnparseableCell);
    const std::string msg = e.what();
    EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
    EXPECT_NE(msg.find("'score'"), std::string::npos) << msg;
  }
  EXPECT_EQ(KindOf([] { LoadString("group,score\nA,0.1,7\n"); }), ErrorKind::kUnparseableCell);
  EXPECT_EQ(KindOf([] { LoadString("group,score\nA,inf\n"); }), ErrorKind::kUnparseableCell);
}

TEST(LoadCsvTest, EmptyFile) {
  EXPECT_EQ(KindOf([] { LoadString(""); }), ErrorKind::kEmptyFile);
  EXPECT_EQ(KindOf([] { LoadString("group,score\n"); }), ErrorKind::kEmptyFile);
  EXPECT_EQ(KindOf([] { LoadCsv("/nonexistent/file.csv", DatasetSchema{}); }), ErrorKind::kEmptyFile);
}

TEST(LoadCsvTest, RowsWithMissingValuesAreDropped) {
  DatasetSchema schema;
  schema.label_column = "y";
  const auto d = LoadString("group,score,y\nA,0.1,1\nB,NA,0\nA,0.3,\n,0.2,1\nB,0.4,nan\nB,0.5,0\n", schema);
  EXPECT_EQ(d.samples.size(), 2u);
  EXPECT_EQ(d.dropped_rows, 4u);
}

TEST(LoadCsvTest, AffineNormalizationRoundTrips) {
  DatasetSchema schema;
  schema.lower = 1.0;
  schema.upper = 4.0;
  schema.normalization = Normalization::kAffineToUnit;
  schema.label_column = "y";
  const auto d = LoadString("group,score,y\nA,1,4\nA,2.5,3.3\nB,3.99,1.07\n", schema);
  EXPECT_EQ(d.samples.rows[0].score, 0.0);
  EXPECT_EQ(*d.samples.rows[0].label, 1.0);
  EXPECT_NEAR(d.samples.rows[1].score, 0.5, 1e-15);
  const std::vector<double> raw{1, 2.5, 3.99};
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(d.scale.ToRaw(d.samples.rows[i].score), raw[i], 1e-12);
  }
  EXPECT_EQ(schema.InternalInterval(), (std::pair<double, double>{0.0, 1.0}));
}

TEST(LoadCsvTest, ReadsFromDisk) {
  const auto path = std::filesystem::temp_directory_path() / "fairpp_data_io_test.csv";
  {
    std::ofstream out(path);
    out << "group,score\nA,0.1\nB,0.2\n";
  }
  const auto d = LoadCsv(path.string(), DatasetSchema{});
  std::filesystem::remove(path);
  EXPECT_EQ(d.samples.size(), 2u);
}

TEST(SchemaTest, JsonRoundTripAndValidation) {
  const auto schema = DatasetSchema::FromJson(nlohmann::json::parse(
      R"({"group": "race", "label": "gpa", "use_label_as_score": true, "interval": [1, 4],
          "normalization": "affine-to-unit", "delimiter": "\t"})"));
  EXPECT_EQ(schema.group_column, "race");
  EXPECT_TRUE(schema.use_label_as_score);
  EXPECT_EQ(schema.delimiter, '\t');
  EXPECT_EQ(schema.Scale().scale, 3.0);
  const auto back = DatasetSchema::FromJson(schema.ToJson());
  EXPECT_EQ(back.ToJson(), schema.ToJson());

  EXPECT_THROW(DatasetSchema::FromJson(nlohmann::json::parse(R"({"interval": [2, 1]})")), Error);
  EXPECT_THROW(DatasetSchema::FromJson(nlohmann::json::parse(R"({"group": "score"})")), Error);
  EXPECT_THROW(DatasetSchema::FromJson(nlohmann::json::parse(R"({"use_label_as_score": true})")), Error);
  EXPECT_THROW(DatasetSchema::FromJson(nlohmann::json::parse(R"({"normalization": "zscore"})")), Error);
  EXPECT_THROW(DatasetSchema::FromJson(nlohmann::json::parse(R"({"interval": "wide"})")), Error);
}

GroupedSamples Numbered(std::size_t n) {
  GroupedSamples s;
  s.groups = {"A", "B", "C"};
  for (std::size_t i = 0; i < n; ++i) s.rows.push_back({i % 3, static_cast<double>(i), std::nullopt});
  return s;
}

TEST(SplitTest, SeventyThirtyOfTen) {
  const auto [train, test] = SplitTrainTest(Numbered(10), 0.7, 1);
  EXPECT_EQ(train.size(), 7u);
  EXPECT_EQ(test.size(), 3u);
}

TEST(SplitTest, SizesRoundUp) {
  EXPECT_EQ(SplitTrainTest(Numbered(1994), 0.7, 1).first.size(), 1396u);  // 1395.8
  EXPECT_EQ(SplitTrainTest(Numbered(3), 0.5, 1).first.size(), 2u);
}

TEST(SplitTest, DeterministicAndSeedSensitive) {
  const auto s = Numbered(100);
  const auto a = SplitTrainTest(s, 0.7, 5);
  const auto b = SplitTrainTest(s, 0.7, 5);
  const auto c = SplitTrainTest(s, 0.7, 6);
  auto scores = [](const GroupedSamples& g) {
    std::vector<double> v;
    for (const auto& r : g.rows) v.push_back(r.score);
    return v;
  };
  EXPECT_EQ(scores(a.first), scores(b.first));
  EXPECT_NE(scores(a.first), scores(c.first));
}

TEST(SplitTest, PartitionsTheRows) {
  const auto s = Numbered(257);
  const auto [train, test] = SplitTrainTest(s, 0.7, 11);
  std::multiset<double> seen;
  for (const auto& r : train.rows) seen.insert(r.score);
  for (const auto& r : test.rows) seen.insert(r.score);
  ASSERT_EQ(seen.size(), 257u);
  std::size_t i = 0;
  for (double v : seen) EXPECT_EQ(v, static_cast<double>(i++));
  EXPECT_EQ(train.groups, s.groups);
  EXPECT_EQ(test.groups, s.groups);
  for (const auto& r : train.rows) EXPECT_EQ(r.group, static_cast<std::size_t>(r.score) % 3);
}

TEST(SplitTest, RejectsBadRatio) {
  EXPECT_THROW(SplitTrainTest(Numbered(10), 0.0, 1), Error);
  EXPECT_THROW(SplitTrainTest(Numbered(10), 1.0, 1), Error);
}

}  // namespace
}  // namespace fairpp
