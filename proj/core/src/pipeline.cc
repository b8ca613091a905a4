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

#include "skim/pipeline.h"

#include <algorithm>
#include <unordered_set>
#include <utility>

#include "skim/error.h"

namespace skim {
namespace {

ModelRun RunGraph(Model model, const Query& query, const VideoFeatures& video,
                  const EmbeddingTable& table, const ModelOptions& options) {
  ModelRun run;
  SummaryGraph graph = BuildGraph(query, video, table, options.graph);
  SeedAssignment seeds = MakeIdentitySeeds(graph);
  PropagationResult result = Propagate(graph, seeds, options.propagation);
  run.ranking = RankByQueryLabels(result, seeds, model);
  run.graph = std::move(graph);
  run.propagation = std::move(result);
  return run;
}

}  // namespace

ModelRun RunModel(Model model, const Query& query, const VideoFeatures& video,
                  const EmbeddingTable& table, const ModelOptions& options) {
  ValidateVideo(video);
  const int threads = options.graph.threads;
  switch (model) {
    case Model::kDirect:
      return {RankDirect(query, video), std::nullopt, std::nullopt};
    case Model::kSemantic:
      return {RankSemantic(query, video, table, threads), std::nullopt,
              std::nullopt};
    case Model::kUniform:
      return {RankUniform(video, options.k, options.seed), std::nullopt,
              std::nullopt};
    case Model::kFirstK:
      return {RankFirstK(video, options.k), std::nullopt, std::nullopt};
    case Model::kGraph:
      return RunGraph(Model::kGraph, query, video, table, options);
    case Model::kGraphRerank: {
      if (options.rerank_n == 0) {
        throw Error(ErrorCode::kInvalidArgument, "rerank_n must be >= 1");
      }
      Ranking semantic = RankSemantic(query, video, table, threads);
      if (video.segments.size() <= options.rerank_n) {
        return RunGraph(Model::kGraphRerank, query, video, table, options);
      }
      VideoFeatures subset =
          RerankFilter(query, video, table, options.rerank_n, threads);
      ModelRun run = RunGraph(Model::kGraphRerank, query, subset, table, options);
      std::unordered_set<std::size_t> kept;
      for (const Segment& s : subset.segments) kept.insert(s.index);
      for (const ScoredSegment& item : semantic.items) {
        if (kept.count(item.index)) continue;
        run.ranking.items.push_back(
            {item.index, 0.0, run.ranking.items.size() + 1});
      }
      return run;
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown model");
}

}  // namespace skim
