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

// skim: rank video segments against a query and emit trailer edit lists.
//
//   skim rank --model graph-rerank --query q.json --segments v.jsonl \
//       --embeddings e.tsv --out out/
//   skim compare --models semantic,graph-rerank ... --report report.json
//   skim gen-fixture --n 200 --cluster 15 --outro 10 --seed 7 --out fx/

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "skim/composer.h"
#include "skim/error.h"
#include "skim/fixture.h"
#include "skim/ingestion.h"
#include "skim/pipeline.h"

namespace {

namespace fs = std::filesystem;
using skim::Error;
using skim::ErrorCode;

constexpr int kExitInput = 1;
constexpr int kExitModel = 2;

struct InputFlags {
  std::string query_path;
  std::string segments_path;
  std::string embeddings_path;
  std::string video_id;
};

struct ModelFlags {
  std::size_t k = skim::kDefaultTrailerLength;
  std::size_t rerank_n = skim::kDefaultRerankSize;
  std::uint64_t seed = 0;
  int max_iters = 50;
  double tolerance = 1e-6;
  std::size_t prune_top_k = 0;
  std::size_t visual_top_m = 0;
  double lambda_semantic = 1.0;
  double lambda_visual = 1.0;
  double lambda_seed = 1.0;
  int threads = 1;
  bool strict = false;
};

struct Inputs {
  std::optional<skim::Query> query;
  skim::VideoFeatures video;
  std::optional<skim::EmbeddingTable> table;
};

void AddInputFlags(CLI::App* cmd, InputFlags& in) {
  cmd->add_option("--query", in.query_path, "Query JSON file");
  cmd->add_option("--segments", in.segments_path, "Segment features (JSON Lines)")
      ->required();
  cmd->add_option("--embeddings", in.embeddings_path, "Entity embedding TSV");
  cmd->add_option("--video-id", in.video_id,
                  "Video id for the edit list (default: segments file stem)");
}

void AddModelFlags(CLI::App* cmd, ModelFlags& m) {
  cmd->add_option("--k", m.k, "Trailer length in segments")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--rerank-n", m.rerank_n,
                  "Segments kept by the graph-rerank model")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", m.seed, "Seed of the uniform baseline")
      ->capture_default_str();
  cmd->add_option("--max-iters", m.max_iters, "Propagation sweep limit")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--tolerance", m.tolerance,
                  "Propagation stops when no label moves more than this")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--prune-top-k", m.prune_top_k,
                  "Labels kept per node after each sweep (0 keeps all)")
      ->capture_default_str();
  cmd->add_option("--visual-top-m", m.visual_top_m,
                  "Visual edges kept per segment (0 keeps the dense graph)")
      ->capture_default_str();
  cmd->add_option("--lambda-semantic", m.lambda_semantic)->capture_default_str();
  cmd->add_option("--lambda-visual", m.lambda_visual)->capture_default_str();
  cmd->add_option("--lambda-seed", m.lambda_seed)->capture_default_str();
  cmd->add_option("--threads", m.threads, "Worker threads")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--strict", m.strict,
                "Fail instead of clamping when k exceeds the segment count");
}

bool NeedsSemantic(skim::Model model) {
  return model == skim::Model::kSemantic || model == skim::Model::kGraph ||
         model == skim::Model::kGraphRerank;
}

bool NeedsQuery(skim::Model model) {
  return NeedsSemantic(model) || model == skim::Model::kDirect;
}

Inputs LoadInputs(const InputFlags& in, const std::vector<skim::Model>& models) {
  Inputs out;
  bool need_query = false, need_table = false;
  for (skim::Model m : models) {
    need_query = need_query || NeedsQuery(m);
    need_table = need_table || NeedsSemantic(m);
  }
  if (need_query && in.query_path.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "--query is required for this model");
  }
  if (need_table && in.embeddings_path.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "--embeddings is required for this model");
  }
  const std::string video_id =
      in.video_id.empty() ? fs::path(in.segments_path).stem().string()
                          : in.video_id;
  try {
    out.video = skim::ParseSegments(skim::ReadFile(in.segments_path), video_id);
  } catch (const Error& e) {
    throw Error(e.code(), in.segments_path + ": " + e.what());
  }
  if (!in.query_path.empty()) {
    try {
      out.query = skim::ParseQuery(skim::ReadFile(in.query_path));
    } catch (const Error& e) {
      throw Error(e.code(), in.query_path + ": " + e.what());
    }
  }
  if (!in.embeddings_path.empty()) {
    try {
      out.table = skim::ParseEmbeddings(skim::ReadFile(in.embeddings_path));
    } catch (const Error& e) {
      throw Error(e.code(), in.embeddings_path + ": " + e.what());
    }
  }
  return out;
}

skim::ModelOptions ToOptions(const ModelFlags& m, std::size_t segment_count) {
  skim::ModelOptions o;
  o.k = m.strict ? m.k : std::min(m.k, segment_count);
  o.rerank_n = m.rerank_n;
  o.seed = m.seed;
  o.graph.lambda_semantic = m.lambda_semantic;
  o.graph.lambda_visual = m.lambda_visual;
  o.graph.lambda_seed = m.lambda_seed;
  o.graph.visual_top_m = m.visual_top_m;
  o.graph.threads = m.threads;
  o.propagation.max_iters = m.max_iters;
  o.propagation.tolerance = m.tolerance;
  if (m.prune_top_k > 0) o.propagation.prune_top_k = m.prune_top_k;
  o.propagation.threads = m.threads;
  return o;
}

skim::ModelRun Run(skim::Model model, const Inputs& inputs,
                   const skim::ModelOptions& options) {
  static const skim::Query kNoQuery;
  static const skim::EmbeddingTable kNoTable(1);
  return skim::RunModel(model, inputs.query ? *inputs.query : kNoQuery,
                        inputs.video, inputs.table ? *inputs.table : kNoTable,
                        options);
}

int ExitCodeFor(const Error& e) {
  return skim::IsModelError(e.code()) ? kExitModel : kExitInput;
}

void EnsureDirectory(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create directory '" + dir + "'");
}

// ---------------------------------------------------------------------------

struct RankFlags {
  std::string model;
  InputFlags in;
  ModelFlags m;
  std::string out_dir;
  std::string trace_path;
  std::string graph_dump_path;
};

int CmdRank(const RankFlags& f) {
  const skim::Model model = skim::ParseModel(f.model);
  Inputs inputs = LoadInputs(f.in, {model});
  const skim::ModelOptions options = ToOptions(f.m, inputs.video.segments.size());
  skim::ModelOptions run_options = options;
  run_options.propagation.record_trace = !f.trace_path.empty();

  if (inputs.query) {
    skim::OverlapStats overlap =
        skim::ComputeEntityOverlap(*inputs.query, inputs.video);
    std::cerr << "entity overlap: " << overlap.overlapping << "/"
              << overlap.segments << " segments\n";
  }

  skim::ModelRun run = Run(model, inputs, run_options);
  skim::TrailerEditList edit =
      skim::Compose(run.ranking, inputs.video, f.m.k, f.m.strict);

  // Everything is rendered before the first file is touched.
  const std::string ranking_json = skim::RankingToJson(run.ranking);
  const std::string trailer_json = skim::EditListToJson(edit);
  const std::string cut_list = skim::EditListToCutList(edit);
  std::string trace_csv, graph_json;
  if (!f.trace_path.empty() && run.propagation) {
    std::ostringstream ss;
    skim::WriteTraceCsv(ss, run.propagation->trace);
    trace_csv = ss.str();
  }
  if (!f.graph_dump_path.empty() && run.graph) {
    graph_json = skim::GraphToJson(*run.graph);
  }

  EnsureDirectory(f.out_dir);
  const fs::path out(f.out_dir);
  skim::WriteFileAtomic((out / "ranking.json").string(), ranking_json);
  skim::WriteFileAtomic((out / "trailer.json").string(), trailer_json);
  skim::WriteFileAtomic((out / "trailer.txt").string(), cut_list);
  if (!trace_csv.empty()) skim::WriteFileAtomic(f.trace_path, trace_csv);
  if (!graph_json.empty()) skim::WriteFileAtomic(f.graph_dump_path, graph_json);
  if (run.propagation) {
    std::cerr << "propagation: " << run.propagation->iterations_run
              << " sweeps, converged=" << (run.propagation->converged ? 1 : 0)
              << ", objective=" << run.propagation->final_objective << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct CompareFlags {
  std::vector<std::string> models;
  InputFlags in;
  ModelFlags m;
  std::string report_path;
};

std::set<std::size_t> TopK(const skim::Ranking& ranking, std::size_t k) {
  std::set<std::size_t> top;
  for (std::size_t r = 0; r < std::min(k, ranking.items.size()); ++r) {
    top.insert(ranking.items[r].index);
  }
  return top;
}

double Jaccard(const std::set<std::size_t>& a, const std::set<std::size_t>& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t common = 0;
  for (std::size_t x : a) common += b.count(x);
  return static_cast<double>(common) /
         static_cast<double>(a.size() + b.size() - common);
}

int CmdCompare(const CompareFlags& f) {
  std::vector<skim::Model> models;
  for (const std::string& name : f.models) models.push_back(skim::ParseModel(name));
  Inputs inputs = LoadInputs(f.in, models);
  const skim::ModelOptions options = ToOptions(f.m, inputs.video.segments.size());
  const std::size_t k = std::min(f.m.k, inputs.video.segments.size());

  nlohmann::ordered_json report;
  report["video_id"] = inputs.video.video_id;
  report["k"] = k;
  nlohmann::ordered_json entries = nlohmann::ordered_json::array();
  std::vector<std::optional<std::set<std::size_t>>> tops;
  for (skim::Model model : models) {
    nlohmann::ordered_json entry;
    entry["model"] = std::string(skim::ModelName(model));
    const auto start = std::chrono::steady_clock::now();
    try {
      skim::ModelRun run = Run(model, inputs, options);
      const auto elapsed = std::chrono::steady_clock::now() - start;
      std::set<std::size_t> top = TopK(run.ranking, k);
      entry["status"] = "ok";
      entry["elapsed_ms"] =
          std::chrono::duration<double, std::milli>(elapsed).count();
      entry["top_k"] = top;
      entry["ranking"] = nlohmann::ordered_json::parse(skim::RankingToJson(run.ranking));
      tops.emplace_back(std::move(top));
    } catch (const Error& e) {
      entry["status"] = "failed";
      entry["error"] = e.what();
      tops.emplace_back(std::nullopt);
    }
    entries.push_back(std::move(entry));
  }
  report["models"] = std::move(entries);

  nlohmann::ordered_json overlap = nlohmann::ordered_json::array();
  for (std::size_t a = 0; a < models.size(); ++a) {
    for (std::size_t b = a + 1; b < models.size(); ++b) {
      if (!tops[a] || !tops[b]) continue;
      overlap.push_back({{"a", a},
                         {"b", b},
                         {"model_a", std::string(skim::ModelName(models[a]))},
                         {"model_b", std::string(skim::ModelName(models[b]))},
                         {"jaccard", Jaccard(*tops[a], *tops[b])}});
    }
  }
  report["overlap"] = std::move(overlap);

  const std::string text = report.dump(2) + "\n";
  if (f.report_path.empty() || f.report_path == "-") {
    std::cout << text;
  } else {
    skim::WriteFileAtomic(f.report_path, text);
  }
  const bool any_ok = std::any_of(tops.begin(), tops.end(),
                                  [](const auto& t) { return t.has_value(); });
  return any_ok ? 0 : kExitModel;
}

// ---------------------------------------------------------------------------

struct FixtureFlags {
  skim::FixtureParams params;
  std::string out_dir;
};

int CmdGenFixture(const FixtureFlags& f) {
  skim::Fixture fx = skim::GenerateFixture(f.params);
  const std::string query = skim::SerializeQuery(fx.query);
  const std::string segments = skim::SerializeSegments(fx.video);
  const std::string embeddings = skim::SerializeEmbeddings(fx.table);
  const std::string manifest = skim::FixtureManifestJson(fx);
  EnsureDirectory(f.out_dir);
  const fs::path out(f.out_dir);
  skim::WriteFileAtomic((out / "query.json").string(), query);
  skim::WriteFileAtomic((out / "segments.jsonl").string(), segments);
  skim::WriteFileAtomic((out / "embeddings.tsv").string(), embeddings);
  skim::WriteFileAtomic((out / "manifest.json").string(), manifest);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Query-driven video trailer ranking"};
  app.require_subcommand(1);

  RankFlags rank;
  CLI::App* rank_cmd = app.add_subcommand(
      "rank", "Rank segments with one model and write ranking + trailer");
  rank_cmd->add_option("--model", rank.model,
                       "direct | semantic | graph | graph-rerank | uniform | "
                       "first-k")
      ->required();
  AddInputFlags(rank_cmd, rank.in);
  AddModelFlags(rank_cmd, rank.m);
  rank_cmd->add_option("--out", rank.out_dir, "Output directory")->required();
  rank_cmd->add_option("--trace", rank.trace_path,
                       "Per-sweep propagation trace CSV (graph models)");
  rank_cmd->add_option("--graph-dump", rank.graph_dump_path,
                       "Graph JSON dump (graph models)");

  CompareFlags compare;
  CLI::App* compare_cmd = app.add_subcommand(
      "compare", "Run several models on the same input and report overlap");
  compare_cmd->add_option("--models", compare.models,
                          "Comma-separated model list")
      ->required()
      ->delimiter(',');
  AddInputFlags(compare_cmd, compare.in);
  AddModelFlags(compare_cmd, compare.m);
  compare_cmd->add_option("--report", compare.report_path,
                          "Report path (default: stdout)");

  FixtureFlags fixture;
  CLI::App* fixture_cmd = app.add_subcommand(
      "gen-fixture", "Generate a synthetic planted-cluster video");
  fixture_cmd->add_option("--n", fixture.params.segments, "Segments")
      ->capture_default_str();
  fixture_cmd->add_option("--cluster", fixture.params.cluster,
                          "Planted relevant cluster size")
      ->capture_default_str();
  fixture_cmd->add_option("--bridge", fixture.params.bridge,
                          "Visually linked, moderately relevant segments")
      ->capture_default_str();
  fixture_cmd->add_option("--outro", fixture.params.outro,
                          "Near-static irrelevant outro block (0 disables)")
      ->capture_default_str();
  fixture_cmd->add_option("--semantic-dim", fixture.params.semantic_dim)
      ->capture_default_str();
  fixture_cmd->add_option("--visual-dim", fixture.params.visual_dim)
      ->capture_default_str();
  fixture_cmd->add_option("--seed", fixture.params.seed)->capture_default_str();
  fixture_cmd->add_option("--out", fixture.out_dir, "Output directory")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (rank_cmd->parsed()) return CmdRank(rank);
    if (compare_cmd->parsed()) return CmdCompare(compare);
    if (fixture_cmd->parsed()) return CmdGenFixture(fixture);
  } catch (const Error& e) {
    std::cerr << "skim: " << e.what() << "\n";
    return ExitCodeFor(e);
  } catch (const std::exception& e) {
    std::cerr << "skim: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
