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

#include "skim/ingestion.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unordered_set>
#include <utility>

#include "json.hpp"
#include "skim/error.h"

namespace skim {
namespace {

using nlohmann::json;

[[noreturn]] void Fail(const std::string& message, int line) {
  throw Error(ErrorCode::kParseError, message, line);
}

int LineOfOffset(std::string_view bytes, std::size_t offset) {
  offset = std::min(offset, bytes.size());
  return 1 + static_cast<int>(
                 std::count(bytes.begin(), bytes.begin() + offset, '\n'));
}

json ParseJson(std::string_view bytes, int base_line) {
  try {
    return json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    // `byte` is 1-based and points just past the offending character.
    int line = base_line - 1 + LineOfOffset(bytes, e.byte > 0 ? e.byte - 1 : 0);
    Fail(std::string("malformed JSON: ") + e.what(), line);
  }
}

const json& Field(const json& obj, const char* name, const std::string& where,
                  int line) {
  if (!obj.is_object()) Fail(where + " is not an object", line);
  auto it = obj.find(name);
  if (it == obj.end()) Fail(where + " is missing field '" + name + "'", line);
  return *it;
}

double Number(const json& v, const std::string& where, int line) {
  if (!v.is_number()) Fail(where + " is not a number", line);
  double d = v.get<double>();
  if (!std::isfinite(d)) Fail(where + " is not finite", line);
  return d;
}

std::vector<EntityAnnotation> Annotations(const json& arr,
                                          const std::string& where, int line) {
  if (!arr.is_array()) Fail(where + " is not an array", line);
  std::vector<EntityAnnotation> out;
  out.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    std::string at = where + "[" + std::to_string(i) + "]";
    const json& id = Field(arr[i], "id", at, line);
    if (!id.is_string() || id.get<std::string>().empty()) {
      Fail(at + ".id must be a non-empty string", line);
    }
    double w = Number(Field(arr[i], "weight", at, line), at + ".weight", line);
    if (w < 0.0 || w > 1.0) Fail(at + ".weight out of range [0, 1]", line);
    out.push_back({id.get<std::string>(), w});
  }
  return out;
}

json AnnotationsJson(const std::vector<EntityAnnotation>& entities) {
  json arr = json::array();
  for (const auto& e : entities) {
    arr.push_back({{"id", e.entity_id}, {"weight", e.weight}});
  }
  return arr;
}

std::string_view StripCr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

bool IsBlank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\r';
  });
}

// Calls fn(line_text, line_number) for every line of `bytes`.
template <typename Fn>
void ForEachLine(std::string_view bytes, Fn&& fn) {
  int number = 0;
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    std::size_t end = bytes.find('\n', pos);
    if (end == std::string_view::npos) end = bytes.size();
    fn(StripCr(bytes.substr(pos, end - pos)), ++number);
    pos = end + 1;
  }
}

std::string FormatDouble(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

void ValidateVideo(const VideoFeatures& video) {
  if (video.segments.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "video has no segments");
  }
  if (video.visual_dim == 0) {
    throw Error(ErrorCode::kInvalidArgument, "visual_dim must be >= 1");
  }
  for (std::size_t i = 0; i < video.segments.size(); ++i) {
    const Segment& s = video.segments[i];
    if (s.visual.dim() != video.visual_dim) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "segment " + std::to_string(s.index) + " has visual dim " +
                      std::to_string(s.visual.dim()));
    }
    if (!(s.duration_s > 0.0) || !(s.start_s >= 0.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "segment " + std::to_string(s.index) +
                      " needs start_s >= 0 and duration_s > 0");
    }
    if (i > 0) {
      const Segment& prev = video.segments[i - 1];
      if (prev.index == s.index) {
        throw Error(ErrorCode::kDuplicateIndex,
                    "duplicate index " + std::to_string(s.index));
      }
      if (prev.index > s.index) {
        throw Error(ErrorCode::kInvalidArgument, "segments not sorted by index");
      }
      if (!(prev.start_s < s.start_s)) {
        throw Error(ErrorCode::kNonMonotoneTimestamps,
                    "start_s does not increase at index " +
                        std::to_string(s.index));
      }
    }
  }
}

Query ParseQuery(std::string_view bytes) {
  json doc = ParseJson(bytes, 1);
  const json& text = Field(doc, "text", "query", 1);
  if (!text.is_string()) Fail("query.text must be a string", 1);
  Query q;
  q.text = text.get<std::string>();
  q.entities = Annotations(Field(doc, "entities", "query", 1),
                           "query.entities", 1);
  if (q.entities.empty()) {
    throw Error(ErrorCode::kEmptyEntities, "query has no entities", 1);
  }
  return q;
}

VideoFeatures ParseSegments(std::string_view bytes, std::string video_id) {
  struct Parsed {
    Segment segment;
    int line;
  };
  std::vector<Parsed> parsed;
  ForEachLine(bytes, [&](std::string_view text, int line) {
    if (IsBlank(text)) return;
    json rec = ParseJson(text, line);
    Segment s;
    const json& index = Field(rec, "index", "segment", line);
    if (!index.is_number_integer() || index.get<long long>() < 0) {
      Fail("segment.index must be a non-negative integer", line);
    }
    s.index = index.get<std::size_t>();
    s.start_s = Number(Field(rec, "start_s", "segment", line),
                       "segment.start_s", line);
    if (s.start_s < 0.0) Fail("segment.start_s is negative", line);
    if (auto it = rec.find("duration_s"); it != rec.end()) {
      s.duration_s = Number(*it, "segment.duration_s", line);
      if (!(s.duration_s > 0.0)) Fail("segment.duration_s must be > 0", line);
    }
    s.entities = Annotations(Field(rec, "entities", "segment", line),
                             "segment.entities", line);
    const json& visual = Field(rec, "visual", "segment", line);
    if (!visual.is_array() || visual.empty()) {
      Fail("segment.visual must be a non-empty array", line);
    }
    std::vector<double> values;
    values.reserve(visual.size());
    for (std::size_t i = 0; i < visual.size(); ++i) {
      values.push_back(
          Number(visual[i], "segment.visual[" + std::to_string(i) + "]", line));
    }
    s.visual = DenseVector(std::move(values));
    parsed.push_back({std::move(s), line});
  });
  if (parsed.empty()) Fail("no segments in input", 1);

  const std::size_t dim = parsed.front().segment.visual.dim();
  for (const Parsed& p : parsed) {
    if (p.segment.visual.dim() != dim) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "visual has " + std::to_string(p.segment.visual.dim()) +
                      " values, expected " + std::to_string(dim),
                  p.line);
    }
  }
  std::stable_sort(parsed.begin(), parsed.end(),
                   [](const Parsed& a, const Parsed& b) {
                     return a.segment.index < b.segment.index;
                   });
  for (std::size_t i = 1; i < parsed.size(); ++i) {
    const Parsed& prev = parsed[i - 1];
    const Parsed& cur = parsed[i];
    if (prev.segment.index == cur.segment.index) {
      throw Error(ErrorCode::kDuplicateIndex,
                  "duplicate index " + std::to_string(cur.segment.index),
                  std::max(prev.line, cur.line));
    }
    if (!(prev.segment.start_s < cur.segment.start_s)) {
      throw Error(ErrorCode::kNonMonotoneTimestamps,
                  "start_s of index " + std::to_string(cur.segment.index) +
                      " does not exceed that of index " +
                      std::to_string(prev.segment.index),
                  cur.line);
    }
  }

  VideoFeatures video;
  video.video_id = std::move(video_id);
  video.visual_dim = dim;
  video.segments.reserve(parsed.size());
  for (Parsed& p : parsed) video.segments.push_back(std::move(p.segment));
  return video;
}

EmbeddingTable ParseEmbeddings(std::string_view bytes) {
  std::size_t dim = 0;
  bool have_header = false;
  std::vector<std::pair<std::string, std::vector<double>>> rows;
  std::vector<int> row_lines;
  ForEachLine(bytes, [&](std::string_view text, int line) {
    if (!have_header) {
      constexpr std::string_view kHeader = "#dim ";
      if (line != 1 || text.substr(0, kHeader.size()) != kHeader) {
        throw Error(ErrorCode::kMissingDimHeader,
                    "first line must be '#dim <d>'", line);
      }
      std::string_view num = text.substr(kHeader.size());
      auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), dim);
      if (ec != std::errc() || ptr != num.data() + num.size() || dim == 0) {
        Fail("invalid dimension in header", line);
      }
      have_header = true;
      return;
    }
    if (IsBlank(text)) return;
    std::size_t tab = text.find('\t');
    if (tab == 0 || tab == std::string_view::npos) {
      Fail("expected 'entity_id<TAB>values'", line);
    }
    std::string id(text.substr(0, tab));
    std::vector<double> values;
    std::size_t pos = tab + 1;
    while (true) {
      std::size_t end = text.find('\t', pos);
      if (end == std::string_view::npos) end = text.size();
      std::string_view field = text.substr(pos, end - pos);
      double v = 0.0;
      auto [ptr, ec] =
          std::from_chars(field.data(), field.data() + field.size(), v);
      if (field.empty() || ec != std::errc() ||
          ptr != field.data() + field.size() || !std::isfinite(v)) {
        Fail("invalid float '" + std::string(field) + "'", line);
      }
      values.push_back(v);
      if (end == text.size()) break;
      pos = end + 1;
    }
    if (values.size() != dim) {
      Fail("row '" + id + "' has " + std::to_string(values.size()) +
               " values, expected " + std::to_string(dim),
           line);
    }
    rows.emplace_back(std::move(id), std::move(values));
    row_lines.push_back(line);
  });
  if (!have_header) {
    throw Error(ErrorCode::kMissingDimHeader, "missing '#dim <d>' header", 1);
  }
  EmbeddingTable table(dim);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (table.Find(rows[i].first) != nullptr) {
      throw Error(ErrorCode::kDuplicateEntity,
                  "duplicate entity '" + rows[i].first + "'", row_lines[i]);
    }
    table.Insert(std::move(rows[i].first), DenseVector(std::move(rows[i].second)));
  }
  return table;
}

std::string SerializeQuery(const Query& query) {
  json doc = {{"text", query.text},
              {"entities", AnnotationsJson(query.entities)}};
  return doc.dump() + "\n";
}

std::string SerializeSegments(const VideoFeatures& video) {
  std::string out;
  for (const Segment& s : video.segments) {
    json rec;
    rec["index"] = s.index;
    rec["start_s"] = s.start_s;
    rec["duration_s"] = s.duration_s;
    rec["entities"] = AnnotationsJson(s.entities);
    rec["visual"] = std::vector<double>(s.visual.values().begin(),
                                        s.visual.values().end());
    out += rec.dump();
    out += '\n';
  }
  return out;
}

std::string SerializeEmbeddings(const EmbeddingTable& table) {
  std::string out = "#dim " + std::to_string(table.dim()) + "\n";
  for (const std::string& id : table.ids()) {
    out += id;
    for (double v : table.Find(id)->values()) {
      out += '\t';
      out += FormatDouble(v);
    }
    out += '\n';
  }
  return out;
}

OverlapStats ComputeEntityOverlap(const Query& query,
                                  const VideoFeatures& video) {
  std::unordered_set<std::string> ids;
  for (const auto& e : query.entities) ids.insert(e.entity_id);
  OverlapStats stats;
  stats.segments = video.segments.size();
  for (const Segment& s : video.segments) {
    if (std::any_of(s.entities.begin(), s.entities.end(),
                    [&](const EntityAnnotation& e) {
                      return ids.count(e.entity_id) > 0;
                    })) {
      ++stats.overlapping;
    }
  }
  return stats;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFileAtomic(const std::string& path, std::string_view contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write '" + tmp + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw Error(ErrorCode::kIo, "short write to '" + tmp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::kIo, "cannot rename into '" + path + "'");
  }
}

}  // namespace skim
