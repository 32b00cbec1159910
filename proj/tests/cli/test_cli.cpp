// Copyright 2026 The tokclust Authors.
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
//
// End-to-end checks of the installed command-line surface. Each case spawns
// the real binary and inspects exit codes, stdout keys, and output files.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "tokclust/io.hpp"
#include "tokclust/segmenter.hpp"
#include "tokclust/synth.hpp"

namespace fs = std::filesystem;

namespace {

const char* binary_path() { return TOKCLUST_BIN; }

fs::path work_dir() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / "tokclust_cli_tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

RunResult run(const std::string& args) {
  static int counter = 0;
  const fs::path out_file = work_dir() / ("stdout" + std::to_string(counter));
  const fs::path err_file = work_dir() / ("stderr" + std::to_string(counter));
  ++counter;
  const std::string command = std::string(binary_path()) + " " + args + " > " +
                              out_file.string() + " 2> " + err_file.string();
  const int status = std::system(command.c_str());
  RunResult result;
  result.exit_code = WEXITSTATUS(status);
  const auto slurp = [](const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };
  result.out = slurp(out_file);
  result.err = slurp(err_file);
  return result;
}

bool file_bytes_equal(const fs::path& a, const fs::path& b) {
  std::ifstream fa(a, std::ios::binary);
  std::ifstream fb(b, std::ios::binary);
  std::ostringstream sa;
  std::ostringstream sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  return fa && fb && sa.str() == sb.str();
}

}  // namespace

TEST_CASE("synth then cluster produces the expected reduction") {
  const fs::path dir = work_dir();
  const RunResult synth = run(
      "synth --output " + (dir / "data").string() +
      " --seed 3 --blobs 5 --dim 16 --frames 12 --grid-rows 7 --grid-cols 7"
      " --jitter 0.05 --separation 0.5");
  REQUIRE(synth.exit_code == 0);
  CHECK(synth.out.find("tokens=588") != std::string::npos);
  CHECK(fs::exists(dir / "data/manifest.json"));
  CHECK(fs::exists(dir / "data/manifest.f32"));
  CHECK(fs::exists(dir / "data/labels.json"));

  const RunResult cluster = run("cluster --input " +
                                (dir / "data/manifest.json").string() +
                                " --output " + (dir / "out").string() +
                                " --segments 3 --clusters 49 --block-tag 6");
  REQUIRE(cluster.exit_code == 0);
  CHECK(cluster.out.find("tokens_before=588") != std::string::npos);
  CHECK(cluster.out.find("tokens_after=147") != std::string::npos);
  CHECK(cluster.out.find("token_reduction_ratio=0.75") != std::string::npos);
  CHECK(cluster.out.find("attention_cost_ratio=0.0625") != std::string::npos);
  CHECK(fs::exists(dir / "out/result.json"));
  CHECK(fs::exists(dir / "out/reduced.json"));
  CHECK(fs::exists(dir / "out/reduced.f32"));
}

TEST_CASE("synth is byte-identical per seed") {
  const fs::path dir = work_dir();
  REQUIRE(run("synth --output " + (dir / "seed_a").string() +
              " --seed 11 --blobs 3 --dim 8 --frames 4 --grid-rows 3 "
              "--grid-cols 3")
              .exit_code == 0);
  REQUIRE(run("synth --output " + (dir / "seed_b").string() +
              " --seed 11 --blobs 3 --dim 8 --frames 4 --grid-rows 3 "
              "--grid-cols 3")
              .exit_code == 0);
  CHECK(file_bytes_equal(dir / "seed_a/manifest.f32", dir / "seed_b/manifest.f32"));
  CHECK(file_bytes_equal(dir / "seed_a/labels.json", dir / "seed_b/labels.json"));
}

TEST_CASE("repeated cluster runs write byte-identical documents") {
  const fs::path dir = work_dir();
  for (const char* algo : {"kmedoids", "spectral"}) {
    const std::string base = "cluster --input " +
                             (dir / "data/manifest.json").string() +
                             " --segments 3 --clusters 20 --algorithm " + algo;
    REQUIRE(run(base + " --output " + (dir / ("rep1_" + std::string(algo))).string())
                .exit_code == 0);
    REQUIRE(run(base + " --output " + (dir / ("rep2_" + std::string(algo))).string())
                .exit_code == 0);
    CHECK(file_bytes_equal(dir / ("rep1_" + std::string(algo)) / "result.json",
                           dir / ("rep2_" + std::string(algo)) / "result.json"));
    CHECK(file_bytes_equal(dir / ("rep1_" + std::string(algo)) / "reduced.f32",
                           dir / ("rep2_" + std::string(algo)) / "reduced.f32"));
  }
  // With 12 frames and S=3, spectral defaults must resolve to sigma 2 and
  // five neighbors per frame.
  const tokclust::ClusterResult spectral_result =
      tokclust::load_cluster_result(dir / "rep1_spectral/result.json");
  CHECK(spectral_result.meta.sigma == 2.0);
  CHECK(spectral_result.meta.knn == 20);
}

TEST_CASE("progressive CLI runs match run_plan") {
  const fs::path dir = work_dir();
  const RunResult first = run("cluster --input " +
                              (dir / "data/manifest.json").string() +
                              " --output " + (dir / "stage1").string() +
                              " --segments 6 --clusters 49 --block-tag 4");
  REQUIRE(first.exit_code == 0);
  const RunResult second = run("cluster --input " +
                               (dir / "stage1/reduced.json").string() +
                               " --output " + (dir / "stage2").string() +
                               " --segments 3 --clusters 49 --block-tag 8");
  REQUIRE(second.exit_code == 0);
  CHECK(second.out.find("tokens_before=294") != std::string::npos);
  CHECK(second.out.find("tokens_after=147") != std::string::npos);

  // The library plan over the same input must produce the same final stage.
  const tokclust::TokenSet tokens =
      tokclust::load_token_set(dir / "data/manifest.json");
  tokclust::ClusteringPlan plan;
  tokclust::StageConfig stage;
  stage.segments = 6;
  stage.clusters = 49;
  stage.block_tag = 4;
  plan.stages.push_back(stage);
  stage.segments = 3;
  stage.block_tag = 8;
  plan.stages.push_back(stage);
  const tokclust::PlanOutcome outcome = tokclust::run_plan(tokens, plan);

  const fs::path replay = dir / "replay";
  fs::create_directories(replay);
  tokclust::save_cluster_result(outcome.stage_results[1], replay / "result.json");
  tokclust::save_token_sequence(outcome.final, replay / "reduced.json");
  CHECK(file_bytes_equal(replay / "result.json", dir / "stage2/result.json"));
  CHECK(file_bytes_equal(replay / "reduced.f32", dir / "stage2/reduced.f32"));
}

TEST_CASE("score prints the matched-pair loss") {
  const fs::path dir = work_dir();
  std::ofstream videos(dir / "videos.json");
  videos << "[[[1.0, 0.0]], [[0.0, 1.0]]]";
  videos.close();
  std::ofstream texts(dir / "texts.json");
  texts << "[[1.0, 0.0], [0.0, 1.0]]";
  texts.close();
  const RunResult score =
      run("score --videos " + (dir / "videos.json").string() + " --texts " +
          (dir / "texts.json").string() + " --tau 1.0");
  REQUIRE(score.exit_code == 0);
  CHECK(score.out.find("loss=0.313262") != std::string::npos);
  CHECK(score.out.find("sim[0]=1.000000 0.000000") != std::string::npos);
  CHECK(score.out.find("video_to_text_ranking[0]=0 1") != std::string::npos);

  // Halving tau rescales the loss but not the rankings.
  const RunResult halved =
      run("score --videos " + (dir / "videos.json").string() + " --texts " +
          (dir / "texts.json").string() + " --tau 0.5");
  REQUIRE(halved.exit_code == 0);
  CHECK(halved.out.find("video_to_text_ranking[0]=0 1") != std::string::npos);
  CHECK(halved.out.find("text_to_video_ranking[1]=1 0") != std::string::npos);
}

TEST_CASE("bench reports medians and stays deterministic") {
  const RunResult bench = run(
      "bench --seed 5 --blobs 4 --dim 16 --frames 6 --grid-rows 4 "
      "--grid-cols 4 --segments 3 --clusters 8 --repeats 3");
  REQUIRE(bench.exit_code == 0);
  CHECK(bench.out.find("repeats=3") != std::string::npos);
  CHECK(bench.out.find("median_total_ms=") != std::string::npos);
  CHECK(bench.out.find("deterministic=true") != std::string::npos);
  const auto pos = bench.out.find("max_iterations_run=");
  REQUIRE(pos != std::string::npos);
  const int iterations =
      std::atoi(bench.out.c_str() + pos + std::string("max_iterations_run=").size());
  CHECK(iterations >= 1);
  CHECK(iterations <= 50);
}

TEST_CASE("exit codes distinguish validation from io failures") {
  const fs::path dir = work_dir();
  // Missing input file: io error.
  CHECK(run("cluster --input " + (dir / "nope.json").string() + " --output " +
            (dir / "x").string() + " --segments 3 --clusters 4")
            .exit_code == 2);
  // K larger than the tokens available per segment: validation error.
  const RunResult bad_k = run("cluster --input " +
                              (dir / "data/manifest.json").string() +
                              " --output " + (dir / "x").string() +
                              " --segments 3 --clusters 999");
  CHECK(bad_k.exit_code == 1);
  CHECK(bad_k.err.find("tokens per segment") != std::string::npos);
  // Segment count that does not divide the frame count: validation error.
  const RunResult bad_s = run("cluster --input " +
                              (dir / "data/manifest.json").string() +
                              " --output " + (dir / "x").string() +
                              " --segments 5 --clusters 4");
  CHECK(bad_s.exit_code == 1);
  CHECK(bad_s.err.find("divide") != std::string::npos);
  // Unknown flags: parse/validation error.
  CHECK(run("cluster --bogus").exit_code == 1);
  CHECK(run("").exit_code == 1);
}
