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

#ifndef SKIM_RANKERS_H_
#define SKIM_RANKERS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "skim/embedding.h"
#include "skim/ingestion.h"

namespace skim {

enum class Model { kDirect, kSemantic, kGraph, kGraphRerank, kUniform, kFirstK };

// Serialized names: direct, semantic, graph, graph_rerank, uniform, first_k.
std::string_view ModelName(Model model);
// Accepts the serialized names and their dashed spellings (graph-rerank,
// first-k). Throws kInvalidArgument.
Model ParseModel(std::string_view name);

struct ScoredSegment {
  std::size_t index = 0;  // segment index, not position
  double score = 0.0;
  std::size_t rank = 0;  // 1-based

  friend bool operator==(const ScoredSegment&, const ScoredSegment&) = default;
};

// A total order over a video's segments. items[r - 1] has rank r.
struct Ranking {
  Model model = Model::kSemantic;
  std::vector<ScoredSegment> items;
  // Segments that could not be scored semantically; they sit at the bottom.
  std::vector<std::size_t> unscorable;

  friend bool operator==(const Ranking&, const Ranking&) = default;
};

// Builds a ranking from per-position scores: descending score, ties broken
// by smaller segment index. Positions flagged in `unscorable` (may be empty)
// are placed after every scored position in index order.
Ranking RankByScores(Model model, const VideoFeatures& video,
                     const std::vector<double>& scores,
                     const std::vector<bool>& unscorable = {});

// Checks that `ranking` is a permutation of the video's segment indices
// with ranks 1..n and non-increasing scores. Throws kInvalidArgument.
void ValidateRanking(const Ranking& ranking, const VideoFeatures& video);

// Sum over entity ids present in both lists of w_query * w_segment.
double DirectMatchScore(const Query& query, const Segment& segment);

// cos(S_q, S_F) for precomputed query aggregate; nullopt when the segment
// has no entity in the table (or its aggregate is the zero vector).
std::optional<double> TrySemanticScore(const DenseVector& query_semantic,
                                       const Segment& segment,
                                       const EmbeddingTable& table);

// Aggregate of the query entities. Throws kUnscorableQuery.
DenseVector QuerySemantic(const Query& query, const EmbeddingTable& table);

// Throws kUnscorableQuery or kUnscorableSegment.
double SemanticScore(const Query& query, const Segment& segment,
                     const EmbeddingTable& table);

// Semantic score per segment position; nullopt marks an unscorable segment.
// `threads` <= 1 runs inline. Output does not depend on `threads`.
std::vector<std::optional<double>> SemanticScores(const Query& query,
                                                  const VideoFeatures& video,
                                                  const EmbeddingTable& table,
                                                  int threads = 1);

Ranking RankDirect(const Query& query, const VideoFeatures& video);
Ranking RankSemantic(const Query& query, const VideoFeatures& video,
                     const EmbeddingTable& table, int threads = 1);
// Seeded random permutation of all segments. Throws kKTooLarge when
// k > segment count, kInvalidArgument when k == 0.
Ranking RankUniform(const VideoFeatures& video, std::size_t k,
                    std::uint64_t seed);
// Segments in index order; the first k form the first-k trailer.
Ranking RankFirstK(const VideoFeatures& video, std::size_t k);

// {"model":..., "items":[{"index":i,"score":s,"rank":r}, ...]}, scores to 9
// significant digits. An "unscorable" array is added when non-empty.
std::string RankingToJson(const Ranking& ranking);

// Rounds to 9 significant digits, the precision of every serialized score.
double RoundSignificant9(double v);

}  // namespace skim

#endif  // SKIM_RANKERS_H_
