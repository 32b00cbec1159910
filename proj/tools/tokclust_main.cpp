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

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tokclust/errors.hpp"
#include "tokclust/io.hpp"
#include "tokclust/metrics.hpp"
#include "tokclust/retrieval.hpp"
#include "tokclust/segmenter.hpp"
#include "tokclust/synth.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", value);
  return buf;
}

std::string fmt_fixed(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", value);
  return buf;
}

struct StageOptions {
  std::string algorithm = "kmedoids";
  int segments = 1;
  int clusters = 1;
  double sigma = 2.0;
  int knn = 0;
  bool normalize = false;
  int max_iterations = 50;
  int block_tag = 0;

  tokclust::StageConfig to_config() const {
    tokclust::StageConfig config;
    if (algorithm == "kmedoids") {
      config.algorithm = tokclust::Algorithm::kmedoids;
    } else if (algorithm == "spectral") {
      config.algorithm = tokclust::Algorithm::spectral;
    } else {
      throw tokclust::ValidationError("unknown algorithm '" + algorithm +
                                      "' (expected kmedoids or spectral)");
    }
    config.segments = segments;
    config.clusters = clusters;
    config.sigma = sigma;
    config.knn = knn;
    config.normalize = normalize;
    config.max_iterations = max_iterations;
    config.block_tag = block_tag;
    return config;
  }
};

void add_stage_options(CLI::App* cmd, StageOptions* opts) {
  cmd->add_option("--algorithm", opts->algorithm,
                  "Clustering algorithm: kmedoids or spectral")
      ->capture_default_str();
  cmd->add_option("--segments", opts->segments, "Temporal segment count S")
      ->capture_default_str();
  cmd->add_option("--clusters", opts->clusters, "Centers per segment K")
      ->capture_default_str();
  cmd->add_option("--sigma", opts->sigma, "Gaussian similarity width")
      ->capture_default_str();
  cmd->add_option("--knn", opts->knn,
                  "Graph neighbors per vertex (0 = 5 x frames per segment)")
      ->capture_default_str();
  cmd->add_flag("--normalize", opts->normalize,
                "L2-normalize embeddings before clustering");
  cmd->add_option("--max-iters", opts->max_iterations,
                  "Iteration cap for the partitioning loops")
      ->capture_default_str();
  cmd->add_option("--block-tag", opts->block_tag,
                  "Transformer block tag recorded in output metadata")
      ->capture_default_str();
}

struct SynthOptions {
  std::uint64_t seed = 0;
  int blobs = 5;
  int dim = 64;
  int frames = 12;
  int grid_rows = 7;
  int grid_cols = 7;
  double separation = 1.0;
  double jitter = 0.1;

  tokclust::SynthConfig to_config() const {
    tokclust::SynthConfig config;
    config.seed = seed;
    config.blobs = blobs;
    config.dim = dim;
    config.num_frames = frames;
    config.grid_rows = grid_rows;
    config.grid_cols = grid_cols;
    config.separation = separation;
    config.jitter = jitter;
    return config;
  }
};

void add_synth_options(CLI::App* cmd, SynthOptions* opts) {
  cmd->add_option("--seed", opts->seed, "Generator seed")->capture_default_str();
  cmd->add_option("--blobs", opts->blobs, "Planted cluster count")
      ->capture_default_str();
  cmd->add_option("--dim", opts->dim, "Embedding dimension")
      ->capture_default_str();
  cmd->add_option("--frames", opts->frames, "Frame count")
      ->capture_default_str();
  cmd->add_option("--grid-rows", opts->grid_rows, "Patch grid rows")
      ->capture_default_str();
  cmd->add_option("--grid-cols", opts->grid_cols, "Patch grid columns")
      ->capture_default_str();
  cmd->add_option("--separation", opts->separation, "Blob center separation")
      ->capture_default_str();
  cmd->add_option("--jitter", opts->jitter, "Per-token Gaussian noise scale")
      ->capture_default_str();
}

bool is_sequence_manifest(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw tokclust::IoError("cannot open " + path.string());
  }
  try {
    return json::parse(in).contains("tokens");
  } catch (const json::parse_error& e) {
    throw tokclust::IoError("malformed document " + path.string() + ": " +
                            e.what());
  }
}

tokclust::StageOutcome run_stage(const fs::path& input,
                                 const tokclust::StageConfig& config,
                                 std::size_t* tokens_before) {
  if (is_sequence_manifest(input)) {
    const tokclust::TokenSequence sequence = tokclust::load_token_sequence(input);
    *tokens_before = sequence.size();
    return tokclust::cluster_sequence(sequence, config);
  }
  const tokclust::TokenSet tokens = tokclust::load_token_set(input);
  *tokens_before = tokens.token_count();
  return tokclust::cluster_segments(tokens, config);
}

void print_stage_report(const tokclust::ClusterResult& result,
                        std::size_t tokens_before, std::size_t tokens_after) {
  const tokclust::ReductionReport report =
      tokclust::reduction_report(tokens_before, tokens_after);
  std::cout << "algorithm=" << result.meta.algorithm << '\n'
            << "segments=" << result.meta.segments << '\n'
            << "clusters=" << result.meta.clusters << '\n'
            << "block_tag=" << result.meta.block_tag << '\n'
            << "sigma=" << fmt(result.meta.sigma) << '\n'
            << "knn=" << result.meta.knn << '\n'
            << "normalize=" << (result.meta.normalize ? "true" : "false") << '\n'
            << "tokens_before=" << report.tokens_before << '\n'
            << "tokens_after=" << report.tokens_after << '\n'
            << "token_reduction_ratio=" << fmt(report.token_reduction_ratio)
            << '\n'
            << "attention_cost_ratio=" << fmt(report.attention_cost_ratio)
            << '\n';
}

int cmd_cluster(const std::string& input, const std::string& output,
                const StageOptions& opts) {
  const tokclust::StageConfig config = opts.to_config();
  std::size_t tokens_before = 0;
  const tokclust::StageOutcome outcome =
      run_stage(input, config, &tokens_before);

  const fs::path out_dir(output);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    throw tokclust::IoError("cannot create output directory " +
                            out_dir.string());
  }
  tokclust::save_cluster_result(outcome.result, out_dir / "result.json");
  tokclust::save_token_sequence(outcome.reduced, out_dir / "reduced.json");

  print_stage_report(outcome.result, tokens_before, outcome.reduced.size());
  std::cout << "result_path=" << (out_dir / "result.json").string() << '\n'
            << "reduced_path=" << (out_dir / "reduced.json").string() << '\n';
  return 0;
}

int cmd_synth(const std::string& output, const SynthOptions& opts) {
  const tokclust::SynthResult synth =
      tokclust::make_planted_blobs(opts.to_config());
  const fs::path out_dir(output);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    throw tokclust::IoError("cannot create output directory " +
                            out_dir.string());
  }
  tokclust::save_token_set(synth.tokens, out_dir / "manifest.json");
  const json labels{{"blobs", opts.blobs}, {"labels", synth.labels}};
  std::ofstream labels_out(out_dir / "labels.json",
                           std::ios::binary | std::ios::trunc);
  labels_out << labels.dump(2) << '\n';
  if (!labels_out) {
    throw tokclust::IoError("cannot write " +
                            (out_dir / "labels.json").string());
  }
  std::cout << "tokens=" << synth.tokens.token_count() << '\n'
            << "dim=" << synth.tokens.dim << '\n'
            << "frames=" << synth.tokens.num_frames << '\n'
            << "blobs=" << opts.blobs << '\n'
            << "manifest_path=" << (out_dir / "manifest.json").string() << '\n'
            << "labels_path=" << (out_dir / "labels.json").string() << '\n';
  return 0;
}

int cmd_bench(const std::string& input, const StageOptions& opts,
              const SynthOptions& synth_opts, int repeats) {
  if (repeats < 1) {
    throw tokclust::ValidationError("repeats must be positive");
  }
  const tokclust::StageConfig config = opts.to_config();

  tokclust::TokenSequence sequence;
  if (!input.empty()) {
    sequence = tokclust::load_token_sequence(input);
  } else {
    sequence =
        tokclust::to_sequence(tokclust::make_planted_blobs(synth_opts.to_config()).tokens);
  }

  std::vector<double> total_ms(repeats);
  tokclust::StageOutcome first;
  bool deterministic = true;
  int max_iterations_run = 0;
  for (int r = 0; r < repeats; ++r) {
    const auto start = std::chrono::steady_clock::now();
    tokclust::StageOutcome outcome = tokclust::cluster_sequence(sequence, config);
    const auto stop = std::chrono::steady_clock::now();
    total_ms[r] =
        std::chrono::duration<double, std::milli>(stop - start).count();
    if (r == 0) {
      first = std::move(outcome);
      for (const auto& seg : first.result.segments) {
        max_iterations_run = std::max(max_iterations_run, seg.iterations_run);
      }
    } else {
      bool same = outcome.reduced.indices == first.reduced.indices &&
                  outcome.result.segments.size() == first.result.segments.size();
      for (std::size_t s = 0; same && s < first.result.segments.size(); ++s) {
        same = outcome.result.segments[s].labels ==
               first.result.segments[s].labels;
      }
      deterministic = deterministic && same;
    }
  }
  std::vector<double> sorted = total_ms;
  std::sort(sorted.begin(), sorted.end());
  const double median = sorted[sorted.size() / 2];

  print_stage_report(first.result, sequence.size(), first.reduced.size());
  std::cout << "repeats=" << repeats << '\n'
            << "median_total_ms=" << fmt(median) << '\n'
            << "median_segment_ms=" << fmt(median / config.segments) << '\n'
            << "max_iterations_run=" << max_iterations_run << '\n'
            << "deterministic=" << (deterministic ? "true" : "false") << '\n';
  return 0;
}

Eigen::MatrixXd parse_matrix(const json& doc, const std::string& what) {
  if (!doc.is_array() || doc.empty()) {
    throw tokclust::ValidationError(what + " must be a non-empty array");
  }
  const std::size_t rows = doc.size();
  std::size_t cols = 0;
  Eigen::MatrixXd out;
  for (std::size_t i = 0; i < rows; ++i) {
    const json& row = doc[i];
    if (!row.is_array() || row.empty()) {
      throw tokclust::ValidationError(what + " rows must be non-empty arrays");
    }
    if (i == 0) {
      cols = row.size();
      out.resize(rows, cols);
    } else if (row.size() != cols) {
      throw tokclust::ValidationError(what + " rows have mismatched lengths");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      if (!row[c].is_number()) {
        throw tokclust::ValidationError(what + " entries must be numbers");
      }
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
          row[c].get<double>();
    }
  }
  return out;
}

int cmd_score(const std::string& videos_path, const std::string& texts_path,
              double tau) {
  std::ifstream videos_in(videos_path, std::ios::binary);
  if (!videos_in) {
    throw tokclust::IoError("cannot open " + videos_path);
  }
  std::ifstream texts_in(texts_path, std::ios::binary);
  if (!texts_in) {
    throw tokclust::IoError("cannot open " + texts_path);
  }
  json videos_doc;
  json texts_doc;
  try {
    videos_doc = json::parse(videos_in);
    texts_doc = json::parse(texts_in);
  } catch (const json::parse_error& e) {
    throw tokclust::IoError(std::string("malformed score input: ") + e.what());
  }

  tokclust::RetrievalBatch batch;
  batch.tau = tau;
  if (!videos_doc.is_array() || videos_doc.empty()) {
    throw tokclust::ValidationError("videos file must hold a non-empty array");
  }
  for (std::size_t i = 0; i < videos_doc.size(); ++i) {
    batch.videos.push_back(
        parse_matrix(videos_doc[i], "video " + std::to_string(i)));
  }
  batch.texts = parse_matrix(texts_doc, "texts");

  const tokclust::LossResult result = tokclust::contrastive_loss(batch);
  const Eigen::Index n = result.similarity.rows();
  std::cout << "videos=" << n << '\n'
            << "segments=" << batch.videos.front().rows() << '\n'
            << "dim=" << batch.texts.cols() << '\n'
            << "tau=" << fmt(tau) << '\n';
  for (Eigen::Index i = 0; i < n; ++i) {
    std::cout << "sim[" << i << "]=";
    for (Eigen::Index j = 0; j < n; ++j) {
      std::cout << (j == 0 ? "" : " ") << fmt_fixed(result.similarity(i, j));
    }
    std::cout << '\n';
  }
  // Rankings: descending similarity, ties toward the lower id.
  std::vector<int> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return result.similarity(i, a) > result.similarity(i, b);
    });
    std::cout << "video_to_text_ranking[" << i << "]=";
    for (std::size_t r = 0; r < order.size(); ++r) {
      std::cout << (r == 0 ? "" : " ") << order[r];
    }
    std::cout << '\n';
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return result.similarity(a, j) > result.similarity(b, j);
    });
    std::cout << "text_to_video_ranking[" << j << "]=";
    for (std::size_t r = 0; r < order.size(); ++r) {
      std::cout << (r == 0 ? "" : " ") << order[r];
    }
    std::cout << '\n';
  }
  std::cout << "loss=" << fmt_fixed(result.loss) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic multi-segment token clustering"};
  app.require_subcommand(1);

  auto* cluster = app.add_subcommand(
      "cluster", "Cluster a token file and emit centers + reduced sequence");
  std::string cluster_input;
  std::string cluster_output;
  StageOptions cluster_opts;
  cluster->add_option("--input", cluster_input, "Input manifest path")
      ->required();
  cluster->add_option("--output", cluster_output, "Output directory")
      ->required();
  add_stage_options(cluster, &cluster_opts);

  auto* synth = app.add_subcommand("synth", "Generate a planted-blob token set");
  std::string synth_output;
  SynthOptions synth_opts;
  synth->add_option("--output", synth_output, "Output directory")->required();
  add_synth_options(synth, &synth_opts);

  auto* bench = app.add_subcommand(
      "bench", "Time the clustering stage and report medians");
  std::string bench_input;
  StageOptions bench_stage_opts;
  SynthOptions bench_synth_opts;
  int repeats = 5;
  bench->add_option("--input", bench_input,
                    "Input manifest (omit to use synthetic data)");
  add_stage_options(bench, &bench_stage_opts);
  add_synth_options(bench, &bench_synth_opts);
  bench->add_option("--repeats", repeats, "Timing repetitions")
      ->capture_default_str();

  auto* score = app.add_subcommand(
      "score", "Segment-level similarity matrix, rankings, and loss");
  std::string videos_path;
  std::string texts_path;
  double tau = 1.0;
  score->add_option("--videos", videos_path, "JSON file: N x S x d array")
      ->required();
  score->add_option("--texts", texts_path, "JSON file: N x d array")
      ->required();
  score->add_option("--tau", tau, "Softmax temperature")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    if (cluster->parsed()) {
      return cmd_cluster(cluster_input, cluster_output, cluster_opts);
    }
    if (synth->parsed()) {
      return cmd_synth(synth_output, synth_opts);
    }
    if (bench->parsed()) {
      return cmd_bench(bench_input, bench_stage_opts, bench_synth_opts, repeats);
    }
    if (score->parsed()) {
      return cmd_score(videos_path, texts_path, tau);
    }
  } catch (const tokclust::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const tokclust::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
