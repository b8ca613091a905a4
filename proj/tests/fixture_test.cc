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

#include "skim/fixture.h"

#include <algorithm>
#include <set>

#include "gtest/gtest.h"
#include "json.hpp"
#include "skim/error.h"
#include "skim/ingestion.h"
#include "skim/rankers.h"

namespace skim {
namespace {

TEST(FixtureTest, DeterministicForASeed) {
  FixtureParams p;
  Fixture a = GenerateFixture(p);
  Fixture b = GenerateFixture(p);
  EXPECT_EQ(SerializeSegments(a.video), SerializeSegments(b.video));
  EXPECT_EQ(SerializeEmbeddings(a.table), SerializeEmbeddings(b.table));
  EXPECT_EQ(FixtureManifestJson(a), FixtureManifestJson(b));
  p.seed = 1;
  EXPECT_NE(SerializeSegments(GenerateFixture(p).video), SerializeSegments(a.video));
}

TEST(FixtureTest, GroupsPartitionTheVideo) {
  Fixture fx = GenerateFixture({});
  EXPECT_EQ(fx.cluster.size(), 15u);
  EXPECT_EQ(fx.bridge.size(), 5u);
  EXPECT_EQ(fx.outro.size(), 10u);
  std::set<std::size_t> all;
  for (const auto* group : {&fx.cluster, &fx.bridge, &fx.outro, &fx.distractors}) {
    all.insert(group->begin(), group->end());
  }
  EXPECT_EQ(all.size(), 200u);
  EXPECT_EQ(fx.outro.back(), 199u);
  EXPECT_EQ(fx.cluster.front(), 50u);
  EXPECT_EQ(fx.bridge.front(), 65u);
  EXPECT_NO_THROW(ValidateVideo(fx.video));
  nlohmann::json manifest = nlohmann::json::parse(FixtureManifestJson(fx));
  EXPECT_EQ(manifest["seed"], 20170101u);
  EXPECT_EQ(manifest["cluster"].size(), 15u);
}

TEST(FixtureTest, ClusterOutscoresEveryOtherGroupSemantically) {
  for (std::uint64_t seed : {20170101ull, 1ull, 2ull, 3ull}) {
    FixtureParams p;
    p.seed = seed;
    Fixture fx = GenerateFixture(p);
    std::vector<std::optional<double>> s = SemanticScores(fx.query, fx.video, fx.table);
    double cluster_min = 1.0, bridge_max = -1.0, bridge_min = 1.0, other_max = -1.0;
    for (std::size_t i : fx.cluster) cluster_min = std::min(cluster_min, *s[i]);
    for (std::size_t i : fx.bridge) {
      bridge_max = std::max(bridge_max, *s[i]);
      bridge_min = std::min(bridge_min, *s[i]);
    }
    for (const auto* g : {&fx.outro, &fx.distractors}) {
      for (std::size_t i : *g) if (s[i]) other_max = std::max(other_max, *s[i]);
    }
    EXPECT_GT(cluster_min, bridge_max);
    EXPECT_GT(cluster_min, other_max);
    // Bridges are semantically unremarkable: some distractor outranks them.
    EXPECT_LT(bridge_min, other_max);
    // The top 15 under the semantic model are exactly the cluster.
    Ranking r = RankSemantic(fx.query, fx.video, fx.table);
    std::vector<std::size_t> top;
    for (std::size_t k = 0; k < 15; ++k) top.push_back(r.items[k].index);
    std::sort(top.begin(), top.end());
    EXPECT_EQ(top, fx.cluster);
  }
}

TEST(FixtureTest, VisualStructure) {
  Fixture fx = GenerateFixture({});
  auto vis = [&](std::size_t i) { return fx.video.segments[i].visual; };
  // The outro is a tight clique orthogonal to the rest of the video.
  for (std::size_t a : fx.outro) {
    for (std::size_t b : fx.outro) if (a != b) EXPECT_GT(Cosine(vis(a), vis(b)), 0.9);
    for (std::size_t c : fx.cluster) EXPECT_NEAR(Cosine(vis(a), vis(c)), 0.0, 1e-12);
  }
  // Bridges look like the cluster.
  double mean = 0.0;
  for (std::size_t b : fx.bridge) {
    for (std::size_t c : fx.cluster) mean += Cosine(vis(b), vis(c));
  }
  mean /= static_cast<double>(fx.bridge.size() * fx.cluster.size());
  EXPECT_GT(mean, 0.5);
}

TEST(FixtureTest, RejectsImpossibleLayouts) {
  FixtureParams p;
  p.cluster = 0;
  EXPECT_THROW(GenerateFixture(p), Error);
  p = {};
  p.segments = 20;
  EXPECT_THROW(GenerateFixture(p), Error);
  p = {};
  p.visual_dim = 4;
  EXPECT_THROW(GenerateFixture(p), Error);
}

}  // namespace
}  // namespace skim
