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
#include <cmath>
#include <numeric>
#include <utility>

#include "json.hpp"
#include "skim/error.h"
#include "skim/random.h"

namespace skim {
namespace {

// Cosine ranges against the query topic.
constexpr double kClusterLo = 0.80, kClusterHi = 0.95;
constexpr double kBridgeLo = 0.50, kBridgeHi = 0.55;
constexpr double kOutroCosine = 0.40;
constexpr double kRelatedLo = 0.42, kRelatedHi = 0.60;
constexpr double kUnrelatedLo = 0.0, kUnrelatedHi = 0.20;
constexpr double kRelatedShare = 0.5;

constexpr std::size_t kSceneLength = 10;
constexpr double kClusterVisualNoise = 0.5;
constexpr double kSceneVisualNoise = 1.0;
constexpr double kOutroVisualNoise = 0.05;

constexpr const char* kTopicEntity = "/fx/topic";
constexpr const char* kOutroEntity = "/fx/outro";

enum class Kind { kDistractor, kCluster, kBridge, kOutro };

// Random unit vector on coordinates [lo, hi) of a `dim`-vector.
std::vector<double> RandomDirection(Rng& rng, std::size_t dim, std::size_t lo,
                                    std::size_t hi) {
  std::vector<double> v(dim, 0.0);
  double norm = 0.0;
  do {
    norm = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      v[i] = rng.Normal();
      norm += v[i] * v[i];
    }
  } while (norm == 0.0);
  norm = std::sqrt(norm);
  for (std::size_t i = lo; i < hi; ++i) v[i] /= norm;
  return v;
}

// Vector whose cosine with the topic axis (coordinate 0) is exactly
// `cosine`, with a random length so inputs are not unit-normalized.
DenseVector EntityEmbedding(Rng& rng, std::size_t dim, double cosine) {
  std::vector<double> v = RandomDirection(rng, dim, 1, dim);
  const double sine = std::sqrt(1.0 - cosine * cosine);
  const double length = rng.Uniform(0.5, 2.0);
  for (double& x : v) x *= sine * length;
  v[0] = cosine * length;
  return DenseVector(std::move(v));
}

std::vector<double> Jitter(Rng& rng, const std::vector<double>& base,
                           double sigma, std::size_t lo, std::size_t hi) {
  std::vector<double> v = base;
  for (std::size_t i = lo; i < hi; ++i) v[i] += sigma * rng.Normal();
  return v;
}

}  // namespace

void ValidateFixtureParams(const FixtureParams& p) {
  if (p.segments == 0 || p.cluster == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "fixture needs at least one segment and one cluster member");
  }
  if (p.segments / 4 + p.cluster + p.bridge + p.outro > p.segments) {
    throw Error(ErrorCode::kInvalidArgument,
                "cluster + bridge + outro do not fit after the first quarter "
                "of the video");
  }
  if (p.semantic_dim < 2 || p.visual_dim < 8) {
    throw Error(ErrorCode::kInvalidArgument,
                "fixture needs semantic_dim >= 2 and visual_dim >= 8");
  }
}

Fixture GenerateFixture(const FixtureParams& params) {
  ValidateFixtureParams(params);
  const std::size_t n = params.segments;
  const std::size_t sdim = params.semantic_dim;
  const std::size_t vdim = params.visual_dim;
  // The outro lives in its own visual subspace, orthogonal to everything else.
  const std::size_t outro_lo = vdim - vdim / 4;

  std::vector<Kind> kinds(n, Kind::kDistractor);
  const std::size_t cluster_start = n / 4;
  for (std::size_t i = 0; i < params.cluster; ++i) {
    kinds[cluster_start + i] = Kind::kCluster;
  }
  for (std::size_t i = 0; i < params.bridge; ++i) {
    kinds[cluster_start + params.cluster + i] = Kind::kBridge;
  }
  for (std::size_t i = n - params.outro; i < n; ++i) kinds[i] = Kind::kOutro;

  Fixture fx;
  fx.params = params;
  for (std::size_t i = 0; i < n; ++i) {
    switch (kinds[i]) {
      case Kind::kCluster: fx.cluster.push_back(i); break;
      case Kind::kBridge: fx.bridge.push_back(i); break;
      case Kind::kOutro: fx.outro.push_back(i); break;
      case Kind::kDistractor: fx.distractors.push_back(i); break;
    }
  }

  Rng rng(params.seed);

  // Exactly round(share * count) distractors are related, chosen at random.
  std::vector<bool> related(n, false);
  {
    std::vector<std::size_t> order = fx.distractors;
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
      std::swap(order[i], order[i + rng.UniformIndex(order.size() - i)]);
    }
    const auto count = static_cast<std::size_t>(
        std::lround(kRelatedShare * static_cast<double>(order.size())));
    for (std::size_t i = 0; i < count; ++i) related[order[i]] = true;
  }

  fx.table = EmbeddingTable(sdim);
  {
    std::vector<double> topic(sdim, 0.0);
    topic[0] = 1.0;
    fx.table.Insert(kTopicEntity, DenseVector(std::move(topic)));
    fx.table.Insert(kOutroEntity, EntityEmbedding(rng, sdim, kOutroCosine));
  }
  fx.query.text = "planted topic";
  fx.query.entities = {{kTopicEntity, 1.0}};

  const std::vector<double> cluster_visual = [&] {
    std::vector<double> v(vdim, 0.0);
    for (std::size_t i = 0; i < outro_lo; ++i) v[i] = rng.Normal();
    return v;
  }();
  const std::vector<double> outro_visual = [&] {
    std::vector<double> v(vdim, 0.0);
    for (std::size_t i = outro_lo; i < vdim; ++i) v[i] = rng.Normal();
    return v;
  }();
  std::vector<double> scene_visual(vdim, 0.0);

  fx.video.video_id = "fixture-" + std::to_string(params.seed);
  fx.video.visual_dim = vdim;
  fx.video.segments.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Segment s;
    s.index = i;
    s.start_s = static_cast<double>(i);
    s.duration_s = 1.0;
    const std::string own = "/fx/seg/" + std::to_string(i);
    const double weight = rng.Uniform(0.6, 1.0);
    std::vector<double> visual;
    switch (kinds[i]) {
      case Kind::kCluster: {
        fx.table.Insert(own, EntityEmbedding(rng, sdim,
                                             rng.Uniform(kClusterLo, kClusterHi)));
        s.entities.push_back({own, weight});
        if ((i - cluster_start) % 2 == 0) s.entities.push_back({kTopicEntity, 0.6});
        visual = Jitter(rng, cluster_visual, kClusterVisualNoise, 0, outro_lo);
        break;
      }
      case Kind::kBridge: {
        fx.table.Insert(own, EntityEmbedding(rng, sdim,
                                             rng.Uniform(kBridgeLo, kBridgeHi)));
        s.entities.push_back({own, weight});
        visual = Jitter(rng, cluster_visual, kClusterVisualNoise, 0, outro_lo);
        break;
      }
      case Kind::kOutro: {
        s.entities.push_back({kOutroEntity, 0.9});
        visual = Jitter(rng, outro_visual, kOutroVisualNoise, outro_lo, vdim);
        break;
      }
      case Kind::kDistractor: {
        const double cosine = related[i]
                                  ? rng.Uniform(kRelatedLo, kRelatedHi)
                                  : rng.Uniform(kUnrelatedLo, kUnrelatedHi);
        fx.table.Insert(own, EntityEmbedding(rng, sdim, cosine));
        s.entities.push_back({own, weight});
        // Linker output that has no embedding; dropped at scoring time.
        if (i % 7 == 3) {
          s.entities.push_back({"/fx/unlinked/" + std::to_string(i), 0.5});
        }
        if (i % kSceneLength == 0 || i == 0) {
          for (std::size_t d = 0; d < outro_lo; ++d) scene_visual[d] = rng.Normal();
        }
        visual = Jitter(rng, scene_visual, kSceneVisualNoise, 0, outro_lo);
        break;
      }
    }
    s.visual = DenseVector(std::move(visual));
    fx.video.segments.push_back(std::move(s));
  }
  return fx;
}

std::string FixtureManifestJson(const Fixture& fixture) {
  nlohmann::ordered_json doc;
  const FixtureParams& p = fixture.params;
  doc["segments"] = p.segments;
  doc["cluster_size"] = p.cluster;
  doc["bridge_size"] = p.bridge;
  doc["outro_size"] = p.outro;
  doc["semantic_dim"] = p.semantic_dim;
  doc["visual_dim"] = p.visual_dim;
  doc["seed"] = p.seed;
  doc["video_id"] = fixture.video.video_id;
  doc["cluster"] = fixture.cluster;
  doc["bridge"] = fixture.bridge;
  doc["outro"] = fixture.outro;
  return doc.dump(2) + "\n";
}

}  // namespace skim
