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

#ifndef SKIM_PIPELINE_H_
#define SKIM_PIPELINE_H_

#include <cstddef>
#include <cstdint>
#include <optional>

#include "skim/composer.h"
#include "skim/embedding.h"
#include "skim/graph.h"
#include "skim/ingestion.h"
#include "skim/labelprop.h"
#include "skim/rankers.h"

namespace skim {

inline constexpr std::size_t kDefaultRerankSize = 100;

struct ModelOptions {
  std::size_t k = kDefaultTrailerLength;  // uniform and first_k
  std::size_t rerank_n = kDefaultRerankSize;
  std::uint64_t seed = 0;  // uniform
  GraphConfig graph;
  PropagationConfig propagation;
};

struct ModelRun {
  Ranking ranking;
  // Set for the graph models.
  std::optional<SummaryGraph> graph;
  std::optional<PropagationResult> propagation;
};

// Runs one model end to end and returns a ranking over every segment.
//
// graph:        propagation over the full query-video graph.
// graph_rerank: propagation over the `rerank_n` most semantically similar
//               segments only; the discarded segments follow in semantic
//               order with score 0.
ModelRun RunModel(Model model, const Query& query, const VideoFeatures& video,
                  const EmbeddingTable& table, const ModelOptions& options = {});

}  // namespace skim

#endif  // SKIM_PIPELINE_H_
