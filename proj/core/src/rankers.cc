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

#include "skim/rankers.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <unordered_map>

#include "json.hpp"
#include "parallel.h"
#include "skim/error.h"
#include "skim/random.h"

namespace skim {
namespace {

constexpr double kUnscorableScore = -1.0;

void CheckK(const VideoFeatures& video, std::size_t k) {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  if (k > video.segments.size()) {
    throw Error(ErrorCode::kKTooLarge,
                "k=" + std::to_string(k) + " exceeds " +
                    std::to_string(video.segments.size()) + " segments");
  }
}

}  // namespace

std::string_view ModelName(Model model) {
  switch (model) {
    case Model::kDirect: return "direct";
    case Model::kSemantic: return "semantic";
    case Model::kGraph: return "graph";
    case Model::kGraphRerank: return "graph_rerank";
    case Model::kUniform: return "uniform";
    case Model::kFirstK: return "first_k";
  }
  return "unknown";
}

Model ParseModel(std::string_view name) {
  std::string n(name);
  std::replace(n.begin(), n.end(), '-', '_');
  for (Model m : {Model::kDirect, Model::kSemantic, Model::kGraph,
                  Model::kGraphRerank, Model::kUniform, Model::kFirstK}) {
    if (n == ModelName(m)) return m;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown model '" + std::string(name) + "'");
}

Ranking RankByScores(Model model, const VideoFeatures& video,
                     const std::vector<double>& scores,
                     const std::vector<bool>& unscorable) {
  const std::size_t n = video.segments.size();
  if (scores.size() != n || (!unscorable.empty() && unscorable.size() != n)) {
    throw Error(ErrorCode::kInvalidArgument, "score count != segment count");
  }
  auto is_unscorable = [&](std::size_t pos) {
    return !unscorable.empty() && unscorable[pos];
  };
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const bool ua = is_unscorable(a), ub = is_unscorable(b);
    if (ua != ub) return ub;
    if (!ua && scores[a] != scores[b]) return scores[a] > scores[b];
    return video.segments[a].index < video.segments[b].index;
  });

  double floor = kUnscorableScore;
  for (std::size_t pos = 0; pos < n; ++pos) {
    if (!is_unscorable(pos)) floor = std::min(floor, scores[pos]);
  }

  Ranking ranking;
  ranking.model = model;
  ranking.items.reserve(n);
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t pos = order[r];
    const bool u = is_unscorable(pos);
    ranking.items.push_back(
        {video.segments[pos].index, u ? std::min(floor, scores[pos]) : scores[pos],
         r + 1});
    if (u) ranking.unscorable.push_back(video.segments[pos].index);
  }
  return ranking;
}

void ValidateRanking(const Ranking& ranking, const VideoFeatures& video) {
  if (ranking.items.size() != video.segments.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "ranking has " + std::to_string(ranking.items.size()) +
                    " items for " + std::to_string(video.segments.size()) +
                    " segments");
  }
  std::unordered_map<std::size_t, bool> seen;
  for (const Segment& s : video.segments) seen[s.index] = false;
  for (std::size_t r = 0; r < ranking.items.size(); ++r) {
    const ScoredSegment& item = ranking.items[r];
    auto it = seen.find(item.index);
    if (it == seen.end() || it->second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "ranking index " + std::to_string(item.index) +
                      " unknown or repeated");
    }
    it->second = true;
    if (item.rank != r + 1) {
      throw Error(ErrorCode::kInvalidArgument, "ranks are not 1..n");
    }
    if (r > 0 && item.score > ranking.items[r - 1].score) {
      throw Error(ErrorCode::kInvalidArgument, "scores increase with rank");
    }
  }
}

double DirectMatchScore(const Query& query, const Segment& segment) {
  double score = 0.0;
  for (const EntityAnnotation& q : query.entities) {
    for (const EntityAnnotation& f : segment.entities) {
      if (q.entity_id == f.entity_id) score += q.weight * f.weight;
    }
  }
  return score;
}

DenseVector QuerySemantic(const Query& query, const EmbeddingTable& table) {
  try {
    DenseVector s = AggregateSemantic(query.entities, table);
    if (s.Norm() == 0.0) {
      throw Error(ErrorCode::kUnscorableQuery,
                  "query semantic aggregate is the zero vector");
    }
    return s;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNoKnownEntities) throw;
    throw Error(ErrorCode::kUnscorableQuery,
                "no query entity is in the embedding table");
  }
}

std::optional<double> TrySemanticScore(const DenseVector& query_semantic,
                                       const Segment& segment,
                                       const EmbeddingTable& table) {
  if (std::none_of(segment.entities.begin(), segment.entities.end(),
                   [&](const EntityAnnotation& e) {
                     return table.Find(e.entity_id) != nullptr;
                   })) {
    return std::nullopt;
  }
  DenseVector s = AggregateSemantic(segment.entities, table);
  if (s.Norm() == 0.0) return std::nullopt;
  return Cosine(query_semantic, s);
}

double SemanticScore(const Query& query, const Segment& segment,
                     const EmbeddingTable& table) {
  std::optional<double> score =
      TrySemanticScore(QuerySemantic(query, table), segment, table);
  if (!score) {
    throw Error(ErrorCode::kUnscorableSegment,
                "segment " + std::to_string(segment.index) +
                    " has no scorable entity");
  }
  return *score;
}

std::vector<std::optional<double>> SemanticScores(const Query& query,
                                                  const VideoFeatures& video,
                                                  const EmbeddingTable& table,
                                                  int threads) {
  const DenseVector q = QuerySemantic(query, table);
  std::vector<std::optional<double>> scores(video.segments.size());
  internal::ParallelFor(scores.size(), threads,
                        [&](std::size_t begin, std::size_t end) {
                          for (std::size_t i = begin; i < end; ++i) {
                            scores[i] =
                                TrySemanticScore(q, video.segments[i], table);
                          }
                        });
  return scores;
}

Ranking RankDirect(const Query& query, const VideoFeatures& video) {
  std::vector<double> scores;
  scores.reserve(video.segments.size());
  for (const Segment& s : video.segments) {
    scores.push_back(DirectMatchScore(query, s));
  }
  return RankByScores(Model::kDirect, video, scores);
}

Ranking RankSemantic(const Query& query, const VideoFeatures& video,
                     const EmbeddingTable& table, int threads) {
  std::vector<std::optional<double>> raw =
      SemanticScores(query, video, table, threads);
  std::vector<double> scores(raw.size());
  std::vector<bool> unscorable(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    unscorable[i] = !raw[i].has_value();
    scores[i] = raw[i].value_or(kUnscorableScore);
  }
  return RankByScores(Model::kSemantic, video, scores, unscorable);
}

Ranking RankUniform(const VideoFeatures& video, std::size_t k,
                    std::uint64_t seed) {
  CheckK(video, k);
  const std::size_t n = video.segments.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  // Forward Fisher-Yates: after step i, perm[0..i] is a uniform sample
  // without replacement in uniformly random order.
  Rng rng(seed);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.UniformIndex(n - i));
    std::swap(perm[i], perm[j]);
  }
  Ranking ranking;
  ranking.model = Model::kUniform;
  ranking.items.reserve(n);
  for (std::size_t r = 0; r < n; ++r) {
    // Scores decrease with rank so the ranking invariants hold.
    ranking.items.push_back({video.segments[perm[r]].index,
                             static_cast<double>(n - r) / static_cast<double>(n),
                             r + 1});
  }
  return ranking;
}

Ranking RankFirstK(const VideoFeatures& video, std::size_t k) {
  CheckK(video, k);
  const std::size_t n = video.segments.size();
  Ranking ranking;
  ranking.model = Model::kFirstK;
  ranking.items.reserve(n);
  for (std::size_t r = 0; r < n; ++r) {
    ranking.items.push_back({video.segments[r].index, r < k ? 1.0 : 0.0, r + 1});
  }
  return ranking;
}

double RoundSignificant9(double v) {
  if (v == 0.0 || !std::isfinite(v)) return v;
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return std::strtod(buf, nullptr);
}

std::string RankingToJson(const Ranking& ranking) {
  nlohmann::ordered_json doc;
  doc["model"] = std::string(ModelName(ranking.model));
  nlohmann::ordered_json items = nlohmann::ordered_json::array();
  for (const ScoredSegment& s : ranking.items) {
    nlohmann::ordered_json item;
    item["index"] = s.index;
    item["score"] = RoundSignificant9(s.score);
    item["rank"] = s.rank;
    items.push_back(std::move(item));
  }
  doc["items"] = std::move(items);
  if (!ranking.unscorable.empty()) doc["unscorable"] = ranking.unscorable;
  return doc.dump() + "\n";
}

}  // namespace skim
