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

#include "skim/composer.h"

#include <vector>

#include "gtest/gtest.h"
#include "json.hpp"
#include "skim/error.h"

namespace skim {
namespace {

VideoFeatures Uniform(std::size_t n) {
  VideoFeatures v;
  v.video_id = "clip";
  v.visual_dim = 1;
  for (std::size_t i = 0; i < n; ++i) {
    Segment s;
    s.index = i;
    s.start_s = static_cast<double>(i);
    s.visual = DenseVector({1.0});
    v.segments.push_back(s);
  }
  return v;
}

Ranking FromOrder(const std::vector<std::size_t>& order) {
  Ranking r;
  for (std::size_t i = 0; i < order.size(); ++i) {
    r.items.push_back({order[i], static_cast<double>(order.size() - i), i + 1});
  }
  return r;
}

std::vector<std::size_t> Rest(std::size_t n, const std::vector<std::size_t>& head) {
  std::vector<std::size_t> order = head;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::find(head.begin(), head.end(), i) == head.end()) order.push_back(i);
  }
  return order;
}

std::vector<std::size_t> CutIndices(const TrailerEditList& e) {
  std::vector<std::size_t> out;
  for (const Cut& c : e.cuts) out.push_back(c.index);
  return out;
}

TEST(ComposeTest, SortsSelectionByStartTime) {
  VideoFeatures v = Uniform(50);
  TrailerEditList e = Compose(FromOrder(Rest(50, {17, 3, 42})), v, 3);
  EXPECT_EQ(CutIndices(e), (std::vector<std::size_t>{3, 17, 42}));
  EXPECT_EQ(e.video_id, "clip");
  EXPECT_DOUBLE_EQ(e.total_duration_s, 3.0);
}

TEST(ComposeTest, SingleCut) {
  VideoFeatures v = Uniform(10);
  TrailerEditList e = Compose(FromOrder(Rest(10, {7})), v, 1);
  ASSERT_EQ(e.cuts.size(), 1u);
  EXPECT_EQ(e.cuts[0], (Cut{7, 7.0, 1.0}));
}

TEST(ComposeTest, KClampsUnlessStrict) {
  VideoFeatures v = Uniform(5);
  Ranking r = FromOrder({4, 3, 2, 1, 0});
  EXPECT_EQ(Compose(r, v, 9).cuts.size(), 5u);
  try {
    Compose(r, v, 9, true);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kKTooLarge);
  }
  EXPECT_THROW(Compose(r, v, 0), Error);
}

TEST(ComposeTest, DefaultLengthIsTwentySeconds) {
  VideoFeatures v = Uniform(200);
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < 200; ++i) order.push_back((i * 37) % 200);
  TrailerEditList e = Compose(FromOrder(order), v);
  EXPECT_EQ(e.cuts.size(), 20u);
  EXPECT_DOUBLE_EQ(e.total_duration_s, 20.0);
}

TEST(ComposeTest, UsesSegmentDurations) {
  VideoFeatures v = Uniform(4);
  v.segments[2].duration_s = 2.5;
  TrailerEditList e = Compose(FromOrder({2, 0, 1, 3}), v, 2);
  EXPECT_DOUBLE_EQ(e.total_duration_s, 3.5);
}

TEST(ComposeTest, RejectsInvalidRanking) {
  VideoFeatures v = Uniform(4);
  EXPECT_THROW(Compose(FromOrder({0, 1, 2}), v, 2), Error);
  EXPECT_THROW(Compose(FromOrder({0, 1, 1, 3}), v, 2), Error);
}

TEST(MergeTest, AdjacentIndicesBecomeOneCut) {
  VideoFeatures v = Uniform(20);
  TrailerEditList e = Compose(FromOrder(Rest(20, {5, 4, 9, 6, 12})), v, 5);
  std::vector<MergedCut> merged = MergeAdjacent(e);
  ASSERT_EQ(merged.size(), 3u);
  EXPECT_EQ(merged[0].indices, (std::vector<std::size_t>{4, 5, 6}));
  EXPECT_DOUBLE_EQ(merged[0].start_s, 4.0);
  EXPECT_DOUBLE_EQ(merged[0].duration_s, 3.0);
  EXPECT_EQ(merged[2].indices, (std::vector<std::size_t>{12}));

  nlohmann::json doc = nlohmann::json::parse(EditListToJson(e));
  EXPECT_EQ(doc["video_id"], "clip");
  ASSERT_EQ(doc["cuts"].size(), 3u);
  EXPECT_EQ(doc["cuts"][0]["index"], 4);
  EXPECT_EQ(doc["cuts"][0]["duration_s"], 3.0);
  EXPECT_EQ(doc["cuts"][0]["indices"], nlohmann::json({4, 5, 6}));
  EXPECT_EQ(doc["cuts"][1]["start_s"], 9.0);
  EXPECT_EQ(doc["total_duration_s"], 5.0);

  EXPECT_EQ(EditListToCutList(e), "4.000\t7.000\n9.000\t10.000\n12.000\t13.000\n");
}

}  // namespace
}  // namespace skim
