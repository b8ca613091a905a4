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

#include "skim/composer.h"

#include <algorithm>
#include <cstdio>
#include <unordered_map>

#include "json.hpp"
#include "skim/error.h"

namespace skim {

TrailerEditList Compose(const Ranking& ranking, const VideoFeatures& video,
                        std::size_t k, bool strict) {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  ValidateRanking(ranking, video);
  const std::size_t n = video.segments.size();
  if (k > n) {
    if (strict) {
      throw Error(ErrorCode::kKTooLarge,
                  "k=" + std::to_string(k) + " exceeds " + std::to_string(n) +
                      " segments");
    }
    k = n;
  }
  std::unordered_map<std::size_t, const Segment*> by_index;
  by_index.reserve(n);
  for (const Segment& s : video.segments) by_index.emplace(s.index, &s);

  TrailerEditList edit;
  edit.video_id = video.video_id;
  edit.cuts.reserve(k);
  for (std::size_t r = 0; r < k; ++r) {
    const Segment& s = *by_index.at(ranking.items[r].index);
    edit.cuts.push_back({s.index, s.start_s, s.duration_s});
  }
  std::sort(edit.cuts.begin(), edit.cuts.end(),
            [](const Cut& a, const Cut& b) { return a.start_s < b.start_s; });
  for (const Cut& c : edit.cuts) edit.total_duration_s += c.duration_s;
  return edit;
}

std::vector<MergedCut> MergeAdjacent(const TrailerEditList& edit_list) {
  std::vector<MergedCut> merged;
  for (const Cut& c : edit_list.cuts) {
    if (!merged.empty() && merged.back().indices.back() + 1 == c.index) {
      merged.back().indices.push_back(c.index);
      merged.back().duration_s += c.duration_s;
    } else {
      merged.push_back({{c.index}, c.start_s, c.duration_s});
    }
  }
  return merged;
}

std::string EditListToJson(const TrailerEditList& edit_list) {
  nlohmann::ordered_json doc;
  doc["video_id"] = edit_list.video_id;
  nlohmann::ordered_json cuts = nlohmann::ordered_json::array();
  for (const MergedCut& m : MergeAdjacent(edit_list)) {
    nlohmann::ordered_json cut;
    cut["index"] = m.indices.front();
    cut["start_s"] = m.start_s;
    cut["duration_s"] = m.duration_s;
    cut["indices"] = m.indices;
    cuts.push_back(std::move(cut));
  }
  doc["cuts"] = std::move(cuts);
  doc["total_duration_s"] = edit_list.total_duration_s;
  return doc.dump() + "\n";
}

std::string EditListToCutList(const TrailerEditList& edit_list) {
  std::string out;
  char line[64];
  for (const MergedCut& m : MergeAdjacent(edit_list)) {
    std::snprintf(line, sizeof(line), "%.3f\t%.3f\n", m.start_s,
                  m.start_s + m.duration_s);
    out += line;
  }
  return out;
}

}  // namespace skim
