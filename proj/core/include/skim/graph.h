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

#ifndef SKIM_GRAPH_H_
#define SKIM_GRAPH_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "skim/embedding.h"
#include "skim/ingestion.h"

namespace skim {

// Node 0 is the query; segment at position p of the video is node p + 1.
using NodeId = std::uint32_t;
inline constexpr NodeId kQueryNode = 0;

struct VisualEdge {
  std::uint32_t a = 0;  // segment position, a < b
  std::uint32_t b = 0;
  double weight = 0.0;
};

struct Neighbor {
  std::uint32_t position = 0;
  double weight = 0.0;
};

struct GraphConfig {
  double lambda_semantic = 1.0;
  double lambda_visual = 1.0;
  double lambda_seed = 1.0;
  // Keep, per segment, only its `visual_top_m` strongest visual edges (an
  // edge survives if either endpoint keeps it). 0 keeps the dense graph.
  std::size_t visual_top_m = 0;
  int threads = 1;
};

// The query-video graph: one query node joined to every segment by its
// semantic similarity, and segments joined pairwise by visual similarity.
// Immutable after construction.
class SummaryGraph {
 public:
  // Validates: one query weight per segment, weights finite and >= 0,
  // edges with a < b < segment count and no repeated pair, lambdas finite
  // and >= 0. Edges may be given in any order.
  SummaryGraph(std::vector<std::size_t> segment_indices,
               std::vector<double> query_weights,
               std::vector<VisualEdge> visual_edges, double lambda_semantic = 1.0,
               double lambda_visual = 1.0, double lambda_seed = 1.0);

  std::size_t num_segments() const { return segment_indices_.size(); }
  std::size_t num_nodes() const { return segment_indices_.size() + 1; }
  static NodeId SegmentNode(std::size_t position) {
    return static_cast<NodeId>(position + 1);
  }

  std::size_t segment_index(std::size_t position) const {
    return segment_indices_[position];
  }
  const std::vector<std::size_t>& segment_indices() const {
    return segment_indices_;
  }
  double query_weight(std::size_t position) const {
    return query_weights_[position];
  }
  const std::vector<double>& query_weights() const { return query_weights_; }

  // Every stored edge, once per unordered pair, sorted by (a, b).
  const std::vector<VisualEdge>& visual_edges() const { return visual_edges_; }
  // Weight of the pair in either order; 0 when no edge is stored.
  double visual_weight(std::size_t a, std::size_t b) const;
  // Positive-weight neighbors of a segment, ascending by position.
  std::span<const Neighbor> neighbors(std::size_t position) const;
  // Sum of positive visual weights at a segment.
  double visual_degree(std::size_t position) const {
    return visual_degree_[position];
  }

  double lambda_semantic() const { return lambda_semantic_; }
  double lambda_visual() const { return lambda_visual_; }
  double lambda_seed() const { return lambda_seed_; }

 private:
  std::vector<std::size_t> segment_indices_;
  std::vector<double> query_weights_;
  std::vector<VisualEdge> visual_edges_;
  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> adjacency_;
  std::vector<double> visual_degree_;
  double lambda_semantic_;
  double lambda_visual_;
  double lambda_seed_;
};

// Query edges carry max(0, semantic score), 0 for unscorable segments;
// visual edges carry max(0, cosine(V_i, V_j)), 0 when either vector is zero.
// Throws kUnscorableQuery or kDimensionMismatch.
SummaryGraph BuildGraph(const Query& query, const VideoFeatures& video,
                        const EmbeddingTable& table,
                        const GraphConfig& config = {});

// The `n` segments with the highest semantic score (ties to the smaller
// index, unscorable last), in their original chronological order. Returns
// the whole video when it has at most `n` segments.
VideoFeatures RerankFilter(const Query& query, const VideoFeatures& video,
                           const EmbeddingTable& table, std::size_t n = 100,
                           int threads = 1);

// Debug dump of nodes, query edges and every stored visual edge.
std::string GraphToJson(const SummaryGraph& graph);

}  // namespace skim

#endif  // SKIM_GRAPH_H_
