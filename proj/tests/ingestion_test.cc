// Copyright 2026 The Skim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "skim/ingestion.h"

#include <filesystem>
#include <string>

#include "gtest/gtest.h"
#include "skim/error.h"
#include "skim/fixture.h"

namespace skim {
namespace {

Error Capture(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "no error thrown";
  return Error(ErrorCode::kInvalidArgument, "none");
}

TEST(ParseQueryTest, Minimal) {
  Query q = ParseQuery(
      R"({"text":"frogs","entities":[{"id":"/m/frog","weight":1.0}]})");
  EXPECT_EQ(q.text, "frogs");
  ASSERT_EQ(q.entities.size(), 1u);
  EXPECT_EQ(q.entities[0].entity_id, "/m/frog");
  EXPECT_EQ(q.entities[0].weight, 1.0);
}

TEST(ParseQueryTest, EmptyEntities) {
  EXPECT_EQ(Capture([] { ParseQuery(R"({"text":"x","entities":[]})"); }).code(),
            ErrorCode::kEmptyEntities);
}

TEST(ParseQueryTest, WeightOutOfRange) {
  Error e = Capture([] {
    ParseQuery(R"({"text":"x","entities":[{"id":"a","weight":1.5}]})");
  });
  EXPECT_EQ(e.code(), ErrorCode::kParseError);
  EXPECT_NE(std::string(e.what()).find("weight"), std::string::npos);
}

TEST(ParseQueryTest, MalformedJsonReportsLine) {
  Error e = Capture([] { ParseQuery("{\n\"text\": \"x\",\n\"entities\": [,]\n}"); });
  EXPECT_EQ(e.code(), ErrorCode::kParseError);
  EXPECT_EQ(e.line(), 3);
}

TEST(ParseQueryTest, MissingFields) {
  EXPECT_EQ(Capture([] { ParseQuery(R"({"entities":[]})"); }).code(),
            ErrorCode::kParseError);
  EXPECT_EQ(Capture([] { ParseQuery(R"({"text":"x","entities":[{"id":"a"}]})"); })
                .code(),
            ErrorCode::kParseError);
  EXPECT_EQ(Capture([] { ParseQuery(R"([1,2])"); }).code(),
            ErrorCode::kParseError);
}

constexpr const char* kTwoSegments =
    R"({"index":1,"start_s":1.0,"entities":[{"id":"b","weight":0.5}],"visual":[0,1,0,0]})"
    "\n"
    R"({"index":0,"start_s":0.0,"entities":[],"visual":[1,0,0,0]})"
    "\n";

TEST(ParseSegmentsTest, SortsByIndexAndDefaultsDuration) {
  VideoFeatures v = ParseSegments(kTwoSegments, "vid");
  EXPECT_EQ(v.video_id, "vid");
  EXPECT_EQ(v.visual_dim, 4u);
  ASSERT_EQ(v.segments.size(), 2u);
  EXPECT_EQ(v.segments[0].index, 0u);
  EXPECT_EQ(v.segments[1].index, 1u);
  EXPECT_EQ(v.segments[0].duration_s, 1.0);
  EXPECT_EQ(v.segments[1].entities.size(), 1u);
}

TEST(ParseSegmentsTest, DuplicateIndex) {
  Error e = Capture([] {
    ParseSegments(
        "{\"index\":0,\"start_s\":0,\"entities\":[],\"visual\":[1]}\n"
        "{\"index\":0,\"start_s\":1,\"entities\":[],\"visual\":[1]}\n");
  });
  EXPECT_EQ(e.code(), ErrorCode::kDuplicateIndex);
  EXPECT_EQ(e.line(), 2);
}

TEST(ParseSegmentsTest, DimensionMismatch) {
  Error e = Capture([] {
    ParseSegments(
        "{\"index\":0,\"start_s\":0,\"entities\":[],\"visual\":[1,0,0,0]}\n"
        "{\"index\":1,\"start_s\":1,\"entities\":[],\"visual\":[1,0,0]}\n");
  });
  EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  EXPECT_EQ(e.line(), 2);
}

TEST(ParseSegmentsTest, NonMonotoneTimestamps) {
  EXPECT_EQ(Capture([] {
              ParseSegments(
                  "{\"index\":0,\"start_s\":5,\"entities\":[],\"visual\":[1]}\n"
                  "{\"index\":1,\"start_s\":5,\"entities\":[],\"visual\":[1]}\n");
            }).code(),
            ErrorCode::kNonMonotoneTimestamps);
}

TEST(ParseSegmentsTest, FieldErrorsCarryLine) {
  Error e = Capture([] {
    ParseSegments(
        "{\"index\":0,\"start_s\":0,\"entities\":[],\"visual\":[1]}\n\n"
        "{\"index\":-1,\"start_s\":1,\"entities\":[],\"visual\":[1]}\n");
  });
  EXPECT_EQ(e.code(), ErrorCode::kParseError);
  EXPECT_EQ(e.line(), 3);
  EXPECT_EQ(Capture([] {
              ParseSegments(
                  "{\"index\":0,\"start_s\":0,\"duration_s\":0,\"entities\":[],"
                  "\"visual\":[1]}");
            }).code(),
            ErrorCode::kParseError);
  EXPECT_EQ(Capture([] { ParseSegments("\n\n"); }).code(),
            ErrorCode::kParseError);
  EXPECT_EQ(Capture([] { ParseSegments("{\"index\":0,\"start_s\":0,"); }).line(), 1);
}

TEST(ParseEmbeddingsTest, Basic) {
  EmbeddingTable t = ParseEmbeddings("#dim 2\na\t1.0\t0.0");
  EXPECT_EQ(t.dim(), 2u);
  EXPECT_EQ(t.size(), 1u);
  EXPECT_EQ(*t.Find("a"), DenseVector({1.0, 0.0}));
}

TEST(ParseEmbeddingsTest, Errors) {
  Error wrong_width = Capture([] { ParseEmbeddings("#dim 2\na\t1\t2\t3\n"); });
  EXPECT_EQ(wrong_width.code(), ErrorCode::kParseError);
  EXPECT_EQ(wrong_width.line(), 2);
  Error dup = Capture([] { ParseEmbeddings("#dim 1\na\t1\nb\t2\na\t3\n"); });
  EXPECT_EQ(dup.code(), ErrorCode::kDuplicateEntity);
  EXPECT_EQ(dup.line(), 4);
  EXPECT_EQ(Capture([] { ParseEmbeddings("a\t1\n"); }).code(),
            ErrorCode::kMissingDimHeader);
  EXPECT_EQ(Capture([] { ParseEmbeddings(""); }).code(),
            ErrorCode::kMissingDimHeader);
  EXPECT_EQ(Capture([] { ParseEmbeddings("#dim 1\na\tnan\n"); }).code(),
            ErrorCode::kParseError);
  EXPECT_EQ(Capture([] { ParseEmbeddings("#dim x\n"); }).code(),
            ErrorCode::kParseError);
  EXPECT_EQ(Capture([] { ParseEmbeddings("#dim 1\na\t1x\n"); }).code(),
            ErrorCode::kParseError);
}

TEST(ParseEmbeddingsTest, ToleratesCrlf) {
  EmbeddingTable t = ParseEmbeddings("#dim 2\r\na\t1\t2\r\n");
  EXPECT_EQ(*t.Find("a"), DenseVector({1.0, 2.0}));
}

// Round trip and order stability over generated inputs of several shapes.
TEST(SerializationTest, RoundTripIsIdentity) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    FixtureParams p;
    p.segments = 60 + 10 * seed;
    p.cluster = 5;
    p.bridge = 2;
    p.outro = 4;
    p.seed = seed;
    Fixture fx = GenerateFixture(p);
    const std::string bytes = SerializeSegments(fx.video);
    VideoFeatures back = ParseSegments(bytes, fx.video.video_id);
    EXPECT_EQ(back, fx.video);
    EXPECT_EQ(SerializeSegments(back), bytes);
    EXPECT_EQ(ParseSegments(bytes, "x"), ParseSegments(bytes, "x"));

    const std::string tsv = SerializeEmbeddings(fx.table);
    EmbeddingTable table = ParseEmbeddings(tsv);
    EXPECT_EQ(SerializeEmbeddings(table), tsv);
    for (const std::string& id : fx.table.ids()) {
      EXPECT_EQ(*table.Find(id), *fx.table.Find(id));
    }

    Query q = ParseQuery(SerializeQuery(fx.query));
    EXPECT_EQ(q.text, fx.query.text);
    EXPECT_EQ(q.entities, fx.query.entities);
  }
}

TEST(OverlapTest, CountsButNeverRejects) {
  Query q{"q", {{"a", 1.0}}};
  VideoFeatures v = ParseSegments(kTwoSegments);
  OverlapStats s = ComputeEntityOverlap(q, v);
  EXPECT_EQ(s.segments, 2u);
  EXPECT_EQ(s.overlapping, 0u);
  q.entities.push_back({"b", 0.5});
  EXPECT_EQ(ComputeEntityOverlap(q, v).overlapping, 1u);
}

TEST(ValidateVideoTest, Invariants) {
  VideoFeatures v = ParseSegments(kTwoSegments);
  EXPECT_NO_THROW(ValidateVideo(v));
  VideoFeatures empty = v;
  empty.segments.clear();
  EXPECT_THROW(ValidateVideo(empty), Error);
  VideoFeatures bad_dur = v;
  bad_dur.segments[0].duration_s = 0.0;
  EXPECT_THROW(ValidateVideo(bad_dur), Error);
  VideoFeatures swapped = v;
  std::swap(swapped.segments[0], swapped.segments[1]);
  EXPECT_THROW(ValidateVideo(swapped), Error);
}

TEST(FileIoTest, AtomicWriteAndRead) {
  const auto dir = std::filesystem::temp_directory_path() / "skim_io_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "f.txt").string();
  WriteFileAtomic(path, "hello\n");
  EXPECT_EQ(ReadFile(path), "hello\n");
  EXPECT_FALSE(std::filesystem::exists(path + ".tmp"));
  EXPECT_THROW(ReadFile((dir / "missing").string()), Error);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace skim
