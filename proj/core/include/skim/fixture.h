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

#ifndef SKIM_FIXTURE_H_
#define SKIM_FIXTURE_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "skim/embedding.h"
#include "skim/ingestion.h"

namespace skim {

// Synthetic query-video pair with known structure.
//
//   cluster:     relevant segments, semantically close to the query and
//                visually alike.
//   bridge:      follow the cluster and look like it but carry only a
//                moderately related entity.
//   outro:       the final segments; near-identical visuals in their own
//                visual subspace and a weakly related entity, so they form
//                a tight but irrelevant cluster.
//   distractors: everything else, grouped into visual scenes of ten
//                segments; a fixed share carries moderately related
//                entities (above the outro), the rest unrelated ones.
struct FixtureParams {
  std::size_t segments = 200;
  std::size_t cluster = 15;
  std::size_t bridge = 5;
  std::size_t outro = 10;
  std::size_t semantic_dim = 16;
  std::size_t visual_dim = 32;
  std::uint64_t seed = 20170101;
};

// Throws kInvalidArgument for inconsistent parameters.
void ValidateFixtureParams(const FixtureParams& params);

struct Fixture {
  FixtureParams params;
  Query query;
  VideoFeatures video;
  EmbeddingTable table{1};
  std::vector<std::size_t> cluster;
  std::vector<std::size_t> bridge;
  std::vector<std::size_t> outro;
  std::vector<std::size_t> distractors;
};

Fixture GenerateFixture(const FixtureParams& params);

// Segment-index groups and parameters as JSON.
std::string FixtureManifestJson(const Fixture& fixture);

}  // namespace skim

#endif  // SKIM_FIXTURE_H_
