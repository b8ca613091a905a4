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

#ifndef SKIM_COMPOSER_H_
#define SKIM_COMPOSER_H_

#include <cstddef>
#include <string>
#include <vector>

#include "skim/ingestion.h"
#include "skim/rankers.h"

namespace skim {

inline constexpr std::size_t kDefaultTrailerLength = 20;

struct Cut {
  std::size_t index = 0;
  double start_s = 0.0;
  double duration_s = 0.0;

  friend bool operator==(const Cut&, const Cut&) = default;
};

// One cut per selected segment, in chronological order.
struct TrailerEditList {
  std::string video_id;
  std::vector<Cut> cuts;
  double total_duration_s = 0.0;

  friend bool operator==(const TrailerEditList&,
                         const TrailerEditList&) = default;
};

// A run of selected segments with consecutive indices, played as one cut.
struct MergedCut {
  std::vector<std::size_t> indices;
  double start_s = 0.0;
  double duration_s = 0.0;
};

// Takes the top-k ranked segments and replays them in chronological order.
// k larger than the segment count is clamped unless `strict` is set, in
// which case it throws kKTooLarge.
TrailerEditList Compose(const Ranking& ranking, const VideoFeatures& video,
                        std::size_t k = kDefaultTrailerLength,
                        bool strict = false);

std::vector<MergedCut> MergeAdjacent(const TrailerEditList& edit_list);

// {"video_id":..., "cuts":[{"index":i,"start_s":t,"duration_s":d,
//   "indices":[...]}], "total_duration_s":T}; one entry per merged cut,
// "index" being the first segment of the run.
std::string EditListToJson(const TrailerEditList& edit_list);

// "start<TAB>end" per merged cut, seconds with 3 decimals.
std::string EditListToCutList(const TrailerEditList& edit_list);

}  // namespace skim

#endif  // SKIM_COMPOSER_H_
