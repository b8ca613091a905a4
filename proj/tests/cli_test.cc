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

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gtest/gtest.h"
#include "json.hpp"
#include "skim/ingestion.h"

namespace {

namespace fs = std::filesystem;

int RunCli(const std::string& args) {
  const std::string cmd = std::string(SKIM_CLI_PATH) + " " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string Slurp(const fs::path& p) { return skim::ReadFile(p.string()); }

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("skim_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    ASSERT_EQ(RunCli("gen-fixture --out " + Path("fx")), 0);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Path(const std::string& name) const { return (dir_ / name).string(); }
  std::string Inputs() const {
    return " --query " + Path("fx/query.json") + " --segments " +
           Path("fx/segments.jsonl") + " --embeddings " + Path("fx/embeddings.tsv");
  }

  fs::path dir_;
};

TEST_F(CliTest, GenFixtureWritesAllFiles) {
  for (const char* f : {"query.json", "segments.jsonl", "embeddings.tsv", "manifest.json"}) {
    EXPECT_TRUE(fs::exists(dir_ / "fx" / f)) << f;
  }
  ASSERT_EQ(RunCli("gen-fixture --out " + Path("fx2")), 0);
  EXPECT_EQ(Slurp(dir_ / "fx" / "segments.jsonl"), Slurp(dir_ / "fx2" / "segments.jsonl"));
  skim::VideoFeatures v = skim::ParseSegments(Slurp(dir_ / "fx" / "segments.jsonl"), "v");
  EXPECT_EQ(v.segments.size(), 200u);
}

TEST_F(CliTest, RankWritesRankingAndTrailer) {
  ASSERT_EQ(RunCli("rank --model semantic" + Inputs() + " --out " + Path("out")), 0);
  nlohmann::json ranking = nlohmann::json::parse(Slurp(dir_ / "out" / "ranking.json"));
  EXPECT_EQ(ranking["model"], "semantic");
  EXPECT_EQ(ranking["items"].size(), 200u);
  nlohmann::json trailer = nlohmann::json::parse(Slurp(dir_ / "out" / "trailer.json"));
  EXPECT_EQ(trailer["video_id"], "segments");
  EXPECT_EQ(trailer["total_duration_s"], 20.0);
  EXPECT_FALSE(Slurp(dir_ / "out" / "trailer.txt").empty());
}

TEST_F(CliTest, GraphRankIsDeterministicAcrossThreads) {
  ASSERT_EQ(RunCli("rank --model graph-rerank --threads 1" + Inputs() + " --out " +
                Path("a") + " --trace " + Path("trace.csv") + " --graph-dump " +
                Path("graph.json")),
            0);
  ASSERT_EQ(RunCli("rank --model graph-rerank --threads 4" + Inputs() + " --out " + Path("b")), 0);
  EXPECT_EQ(Slurp(dir_ / "a" / "ranking.json"), Slurp(dir_ / "b" / "ranking.json"));
  EXPECT_EQ(Slurp(dir_ / "a" / "trailer.json"), Slurp(dir_ / "b" / "trailer.json"));
  EXPECT_EQ(Slurp(dir_ / "trace.csv").rfind("iteration,objective", 0), 0u);
  nlohmann::json graph = nlohmann::json::parse(Slurp(dir_ / "graph.json"));
  EXPECT_EQ(graph["segment_nodes"].size(), 100u);
}

TEST_F(CliTest, BaselinesNeedOnlySegments) {
  EXPECT_EQ(RunCli("rank --model first-k --segments " + Path("fx/segments.jsonl") +
                " --out " + Path("fk")),
            0);
  EXPECT_EQ(RunCli("rank --model uniform --seed 3 --segments " +
                Path("fx/segments.jsonl") + " --out " + Path("u")),
            0);
  EXPECT_EQ(RunCli("rank --model semantic --segments " + Path("fx/segments.jsonl") +
                " --out " + Path("s")),
            1);
}

TEST_F(CliTest, ExitCodes) {
  // Unknown flags and models are input errors.
  EXPECT_EQ(RunCli("rank --model nope" + Inputs() + " --out " + Path("x")), 1);
  EXPECT_EQ(RunCli("rank --bogus"), 1);
  // A malformed segment file is an input error and writes nothing.
  std::ofstream(dir_ / "bad.jsonl") << "{\"index\": 0,\n";
  EXPECT_EQ(RunCli("rank --model first-k --segments " + Path("bad.jsonl") + " --out " +
                Path("bad_out")),
            1);
  EXPECT_FALSE(fs::exists(dir_ / "bad_out" / "ranking.json"));
  // A query no entity of which has an embedding is a model error.
  std::ofstream(dir_ / "q.json") << R"({"text": "x", "entities": [{"id": "/none", "weight": 1.0}]})";
  EXPECT_EQ(RunCli("rank --model semantic --query " + Path("q.json") + " --segments " +
                Path("fx/segments.jsonl") + " --embeddings " +
                Path("fx/embeddings.tsv") + " --out " + Path("m")),
            2);
  EXPECT_EQ(RunCli("rank --model first-k --k 500 --strict --segments " +
                Path("fx/segments.jsonl") + " --out " + Path("k")),
            1);
}

TEST_F(CliTest, CompareReportsEveryModel) {
  ASSERT_EQ(RunCli("compare --models semantic,graph_rerank,first_k,uniform" + Inputs() +
                " --report " + Path("report.json")),
            0);
  nlohmann::json report = nlohmann::json::parse(Slurp(dir_ / "report.json"));
  ASSERT_EQ(report["models"].size(), 4u);
  for (const auto& m : report["models"]) {
    EXPECT_EQ(m["status"], "ok");
    EXPECT_EQ(m["top_k"].size(), 20u);
  }
  EXPECT_EQ(report["overlap"].size(), 6u);
}

TEST_F(CliTest, CompareKeepsGoingWhenOneModelFails) {
  std::ofstream(dir_ / "q.json") << R"({"text": "x", "entities": [{"id": "/none", "weight": 1.0}]})";
  ASSERT_EQ(RunCli("compare --models direct,semantic --query " + Path("q.json") +
                " --segments " + Path("fx/segments.jsonl") + " --embeddings " +
                Path("fx/embeddings.tsv") + " --report " + Path("r.json")),
            0);
  nlohmann::json report = nlohmann::json::parse(Slurp(dir_ / "r.json"));
  EXPECT_EQ(report["models"][0]["status"], "ok");
  EXPECT_EQ(report["models"][1]["status"], "failed");
  EXPECT_TRUE(report["overlap"].empty());
}

}  // namespace
