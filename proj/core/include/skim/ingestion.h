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

#ifndef SKIM_INGESTION_H_
#define SKIM_INGESTION_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "skim/embedding.h"

namespace skim {

struct Query {
  std::string text;
  std::vector<EntityAnnotation> entities;
};

// One selectable slice of a video, usually one second long.
struct Segment {
  std::size_t index = 0;
  double start_s = 0.0;
  double duration_s = 1.0;
  std::vector<EntityAnnotation> entities;
  DenseVector visual{std::vector<double>{0.0}};

  friend bool operator==(const Segment&, const Segment&) = default;
};

struct VideoFeatures {
  std::string video_id;
  std::vector<Segment> segments;  // sorted by index
  std::size_t visual_dim = 0;

  friend bool operator==(const VideoFeatures&, const VideoFeatures&) = default;
};

// Checks the VideoFeatures invariants: non-empty, unique indices in
// ascending order, strictly increasing start times, positive durations and
// a shared visual dimension.
void ValidateVideo(const VideoFeatures& video);

// {"text": ..., "entities": [{"id": ..., "weight": ...}, ...]}
Query ParseQuery(std::string_view bytes);

// JSON Lines, one segment per line:
//   {"index":i,"start_s":t,"duration_s":d,"entities":[...],"visual":[...]}
// duration_s is optional and defaults to 1.0. Blank lines are skipped.
VideoFeatures ParseSegments(std::string_view bytes, std::string video_id = {});

// UTF-8 TSV. First line "#dim <d>", then "entity_id<TAB>v1<TAB>...<TAB>vd".
EmbeddingTable ParseEmbeddings(std::string_view bytes);

std::string SerializeQuery(const Query& query);
std::string SerializeSegments(const VideoFeatures& video);
std::string SerializeEmbeddings(const EmbeddingTable& table);

// Number of segments sharing at least one entity id with the query. Only
// reported; inputs with no overlap are valid.
struct OverlapStats {
  std::size_t segments = 0;
  std::size_t overlapping = 0;
};
OverlapStats ComputeEntityOverlap(const Query& query,
                                  const VideoFeatures& video);

// Whole-file read and atomic write (temp file + rename). Throw kIo.
std::string ReadFile(const std::string& path);
void WriteFileAtomic(const std::string& path, std::string_view contents);

}  // namespace skim

#endif  // SKIM_INGESTION_H_
