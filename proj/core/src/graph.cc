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

#include "skim/graph.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <utility>

#include "json.hpp"
#include "parallel.h"
#include "skim/error.h"
#include "skim/rankers.h"

namespace skim {
namespace {

void CheckWeight(double w, const char* what) {
  if (!std::isfinite(w) || w < 0.0) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(what) + " must be finite and >= 0");
  }
}

// max(0, cosine) with precomputed norms; same arithmetic as Cosine().
double ClampedCosine(std::span<const double> u, double norm_u,
                     std::span<const double> v, double norm_v) {
  if (norm_u == 0.0 || norm_v == 0.0) return 0.0;
  double dot = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) dot += u[i] * v[i];
  double c = dot / (norm_u * norm_v);
  return std::clamp(c, 0.0, 1.0);
}

std::vector<double> VisualNorms(const VideoFeatures& video) {
  std::vector<double> norms;
  norms.reserve(video.segments.size());
  for (const Segment& s : video.segments) {
    double sum = 0.0;
    for (double v : s.visual.values()) sum += v * v;
    norms.push_back(std::sqrt(sum));
  }
  return norms;
}

std::vector<VisualEdge> DenseEdges(const VideoFeatures& video,
                                   const std::vector<double>& norms,
                                   int threads) {
  const std::size_t n = video.segments.size();
  std::vector<VisualEdge> edges(n * (n - 1) / 2);
  // Row a occupies [a*(2n-a-1)/2, ...) in the flattened upper triangle.
  internal::ParallelFor(n, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t a = begin; a < end; ++a) {
      std::size_t k = a * (2 * n - a - 1) / 2;
      for (std::size_t b = a + 1; b < n; ++b, ++k) {
        edges[k] = {static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b),
                    ClampedCosine(video.segments[a].visual.values(), norms[a],
                                  video.segments[b].visual.values(), norms[b])};
      }
    }
  });
  return edges;
}

std::vector<VisualEdge> SparseEdges(const VideoFeatures& video,
                                    const std::vector<double>& norms,
                                    std::size_t top_m, int threads) {
  const std::size_t n = video.segments.size();
  std::vector<std::vector<Neighbor>> kept(n);
  internal::ParallelFor(n, threads, [&](std::size_t begin, std::size_t end) {
    std::vector<Neighbor> row;
    row.reserve(n);
    for (std::size_t a = begin; a < end; ++a) {
      row.clear();
      for (std::size_t b = 0; b < n; ++b) {
        if (b == a) continue;
        double w = ClampedCosine(video.segments[a].visual.values(), norms[a],
                                 video.segments[b].visual.values(), norms[b]);
        if (w > 0.0) row.push_back({static_cast<std::uint32_t>(b), w});
      }
      auto stronger = [](const Neighbor& x, const Neighbor& y) {
        if (x.weight != y.weight) return x.weight > y.weight;
        return x.position < y.position;
      };
      if (row.size() > top_m) {
        std::partial_sort(row.begin(), row.begin() + top_m, row.end(), stronger);
        row.resize(top_m);
      }
      kept[a] = row;
    }
  });
  std::vector<VisualEdge> edges;
  for (std::size_t a = 0; a < n; ++a) {
    for (const Neighbor& nb : kept[a]) {
      auto lo = static_cast<std::uint32_t>(std::min<std::size_t>(a, nb.position));
      auto hi = static_cast<std::uint32_t>(std::max<std::size_t>(a, nb.position));
      edges.push_back({lo, hi, nb.weight});
    }
  }
  std::sort(edges.begin(), edges.end(), [](const VisualEdge& x, const VisualEdge& y) {
    return std::pair(x.a, x.b) < std::pair(y.a, y.b);
  });
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](const VisualEdge& x, const VisualEdge& y) {
                            return x.a == y.a && x.b == y.b;
                          }),
              edges.end());
  return edges;
}

}  // namespace

SummaryGraph::SummaryGraph(std::vector<std::size_t> segment_indices,
                           std::vector<double> query_weights,
                           std::vector<VisualEdge> visual_edges,
                           double lambda_semantic, double lambda_visual,
                           double lambda_seed)
    : segment_indices_(std::move(segment_indices)),
      query_weights_(std::move(query_weights)),
      visual_edges_(std::move(visual_edges)),
      lambda_semantic_(lambda_semantic),
      lambda_visual_(lambda_visual),
      lambda_seed_(lambda_seed) {
  const std::size_t n = segment_indices_.size();
  if (query_weights_.size() != n) {
    throw Error(ErrorCode::kInvalidArgument,
                "need one query weight per segment node");
  }
  CheckWeight(lambda_semantic_, "lambda_semantic");
  CheckWeight(lambda_visual_, "lambda_visual");
  CheckWeight(lambda_seed_, "lambda_seed");
  for (double w : query_weights_) CheckWeight(w, "query edge weight");

  std::sort(visual_edges_.begin(), visual_edges_.end(),
            [](const VisualEdge& x, const VisualEdge& y) {
              return std::pair(x.a, x.b) < std::pair(y.a, y.b);
            });
  for (std::size_t i = 0; i < visual_edges_.size(); ++i) {
    const VisualEdge& e = visual_edges_[i];
    if (e.a >= e.b || e.b >= n) {
      throw Error(ErrorCode::kInvalidArgument,
                  "visual edge needs a < b < segment count (self-edges are "
                  "not allowed)");
    }
    CheckWeight(e.weight, "visual edge weight");
    if (i > 0 && visual_edges_[i - 1].a == e.a && visual_edges_[i - 1].b == e.b) {
      throw Error(ErrorCode::kInvalidArgument, "repeated visual edge");
    }
  }

  // CSR over positive edges; neighbor lists come out ascending because
  // edges are sorted by (a, b) and each list receives its lower partners
  // (as b) before its higher ones (as a).
  std::vector<std::size_t> degree(n, 0);
  for (const VisualEdge& e : visual_edges_) {
    if (e.weight > 0.0) {
      ++degree[e.a];
      ++degree[e.b];
    }
  }
  offsets_.assign(n + 1, 0);
  for (std::size_t p = 0; p < n; ++p) offsets_[p + 1] = offsets_[p] + degree[p];
  adjacency_.resize(offsets_[n]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const VisualEdge& e : visual_edges_) {
    if (e.weight <= 0.0) continue;
    adjacency_[fill[e.a]++] = {e.b, e.weight};
    adjacency_[fill[e.b]++] = {e.a, e.weight};
  }
  for (std::size_t p = 0; p < n; ++p) {
    std::sort(adjacency_.begin() + offsets_[p], adjacency_.begin() + offsets_[p + 1],
              [](const Neighbor& x, const Neighbor& y) {
                return x.position < y.position;
              });
  }
  visual_degree_.assign(n, 0.0);
  for (std::size_t p = 0; p < n; ++p) {
    for (const Neighbor& nb : neighbors(p)) visual_degree_[p] += nb.weight;
  }
}

double SummaryGraph::visual_weight(std::size_t a, std::size_t b) const {
  if (a == b) return 0.0;
  if (a > b) std::swap(a, b);
  auto it = std::lower_bound(visual_edges_.begin(), visual_edges_.end(),
                             std::pair(a, b),
                             [](const VisualEdge& e, const auto& key) {
                               return std::pair<std::size_t, std::size_t>(
                                          e.a, e.b) < key;
                             });
  if (it == visual_edges_.end() || it->a != a || it->b != b) return 0.0;
  return it->weight;
}

std::span<const Neighbor> SummaryGraph::neighbors(std::size_t position) const {
  return std::span<const Neighbor>(adjacency_.data() + offsets_[position],
                                   offsets_[position + 1] - offsets_[position]);
}

SummaryGraph BuildGraph(const Query& query, const VideoFeatures& video,
                        const EmbeddingTable& table, const GraphConfig& config) {
  ValidateVideo(video);
  std::vector<std::optional<double>> semantic =
      SemanticScores(query, video, table, config.threads);
  std::vector<double> query_weights(semantic.size());
  for (std::size_t i = 0; i < semantic.size(); ++i) {
    query_weights[i] = std::max(0.0, semantic[i].value_or(0.0));
  }
  std::vector<double> norms = VisualNorms(video);
  const bool dense = config.visual_top_m == 0 ||
                     config.visual_top_m + 1 >= video.segments.size();
  std::vector<VisualEdge> edges =
      dense ? DenseEdges(video, norms, config.threads)
            : SparseEdges(video, norms, config.visual_top_m, config.threads);
  std::vector<std::size_t> indices;
  indices.reserve(video.segments.size());
  for (const Segment& s : video.segments) indices.push_back(s.index);
  return SummaryGraph(std::move(indices), std::move(query_weights),
                      std::move(edges), config.lambda_semantic,
                      config.lambda_visual, config.lambda_seed);
}

VideoFeatures RerankFilter(const Query& query, const VideoFeatures& video,
                           const EmbeddingTable& table, std::size_t n,
                           int threads) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "rerank n must be >= 1");
  Ranking semantic = RankSemantic(query, video, table, threads);
  if (video.segments.size() <= n) return video;
  std::vector<std::size_t> keep;
  keep.reserve(n);
  for (std::size_t r = 0; r < n; ++r) keep.push_back(semantic.items[r].index);
  std::sort(keep.begin(), keep.end());
  VideoFeatures subset;
  subset.video_id = video.video_id;
  subset.visual_dim = video.visual_dim;
  subset.segments.reserve(n);
  for (const Segment& s : video.segments) {
    if (std::binary_search(keep.begin(), keep.end(), s.index)) {
      subset.segments.push_back(s);
    }
  }
  return subset;
}

std::string GraphToJson(const SummaryGraph& graph) {
  nlohmann::ordered_json doc;
  doc["query_node"] = kQueryNode;
  nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
  nlohmann::ordered_json query_edges = nlohmann::ordered_json::array();
  for (std::size_t p = 0; p < graph.num_segments(); ++p) {
    nodes.push_back({{"node", SummaryGraph::SegmentNode(p)},
                     {"index", graph.segment_index(p)}});
    query_edges.push_back({{"node", SummaryGraph::SegmentNode(p)},
                           {"weight", graph.query_weight(p)}});
  }
  nlohmann::ordered_json visual = nlohmann::ordered_json::array();
  for (const VisualEdge& e : graph.visual_edges()) {
    visual.push_back({{"a", SummaryGraph::SegmentNode(e.a)},
                      {"b", SummaryGraph::SegmentNode(e.b)},
                      {"weight", e.weight}});
  }
  doc["segment_nodes"] = std::move(nodes);
  doc["query_edges"] = std::move(query_edges);
  doc["visual_edges"] = std::move(visual);
  doc["lambda_semantic"] = graph.lambda_semantic();
  doc["lambda_visual"] = graph.lambda_visual();
  doc["lambda_seed"] = graph.lambda_seed();
  return doc.dump() + "\n";
}

}  // namespace skim
