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

#include "tokclust/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "tokclust/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "payloads are little-endian; big-endian hosts need byte swaps");

namespace tokclust {
namespace {

using nlohmann::json;

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw IoError("malformed document " + path.string() + ": " + e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  out << text << '\n';
  if (!out) {
    throw IoError("short write to " + path.string());
  }
}

std::vector<float> read_payload(const std::filesystem::path& path,
                                std::size_t expected_floats) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) {
    throw IoError("cannot open payload " + path.string());
  }
  const std::streamoff size = in.tellg();
  const std::size_t expected_bytes = expected_floats * sizeof(float);
  if (static_cast<std::size_t>(size) != expected_bytes) {
    std::ostringstream out;
    out << "payload " << path.string() << " holds " << size
        << " bytes, expected " << expected_bytes;
    throw IoError(out.str());
  }
  std::vector<float> data(expected_floats);
  in.seekg(0);
  in.read(reinterpret_cast<char*>(data.data()),
          static_cast<std::streamsize>(expected_bytes));
  if (!in) {
    throw IoError("short read from payload " + path.string());
  }
  return data;
}

void write_payload(const std::filesystem::path& path,
                   const std::vector<float>& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open payload " + path.string() + " for writing");
  }
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size() * sizeof(float)));
  if (!out) {
    throw IoError("short write to payload " + path.string());
  }
}

template <typename T>
T require(const json& doc, const char* key, const std::filesystem::path& path) {
  if (!doc.contains(key)) {
    throw IoError("manifest " + path.string() + " is missing key '" + key +
                  "'");
  }
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw IoError("manifest " + path.string() + " key '" + key +
                  "' has the wrong type: " + e.what());
  }
}

std::filesystem::path payload_path(const std::filesystem::path& manifest_path,
                                   const std::string& relative) {
  return manifest_path.parent_path() / relative;
}

std::string default_payload_name(const std::filesystem::path& manifest_path) {
  return manifest_path.stem().string() + ".f32";
}

json token_index_to_json(const TokenIndex& index) {
  return json{{"frame", index.frame}, {"row", index.row}, {"col", index.col}};
}

TokenIndex token_index_from_json(const json& doc,
                                 const std::filesystem::path& path) {
  TokenIndex index;
  index.frame = require<int>(doc, "frame", path);
  index.row = require<int>(doc, "row", path);
  index.col = require<int>(doc, "col", path);
  return index;
}

}  // namespace

TokenSet load_token_set(const std::filesystem::path& manifest_path) {
  const json doc = read_json(manifest_path);
  TokenSet tokens;
  tokens.dim = require<int>(doc, "dim", manifest_path);
  tokens.num_frames = require<int>(doc, "num_frames", manifest_path);
  tokens.tokens_per_frame = require<int>(doc, "tokens_per_frame", manifest_path);
  tokens.grid_rows = require<int>(doc, "grid_rows", manifest_path);
  tokens.grid_cols = require<int>(doc, "grid_cols", manifest_path);
  const auto dtype = require<std::string>(doc, "dtype", manifest_path);
  if (dtype != "f32le") {
    throw IoError("unsupported dtype '" + dtype + "' in " +
                  manifest_path.string());
  }
  if (tokens.dim <= 0 || tokens.num_frames <= 0 || tokens.tokens_per_frame <= 0) {
    throw IoError("manifest " + manifest_path.string() +
                  " has non-positive shape values");
  }
  const auto payload = require<std::string>(doc, "payload", manifest_path);
  tokens.data = read_payload(payload_path(manifest_path, payload),
                             tokens.token_count() * tokens.dim);
  tokens.validate();
  return tokens;
}

void save_token_set(const TokenSet& tokens,
                    const std::filesystem::path& manifest_path) {
  tokens.validate();
  const std::string payload = default_payload_name(manifest_path);
  json doc{
      {"dim", tokens.dim},
      {"num_frames", tokens.num_frames},
      {"tokens_per_frame", tokens.tokens_per_frame},
      {"grid_rows", tokens.grid_rows},
      {"grid_cols", tokens.grid_cols},
      {"dtype", "f32le"},
      {"payload", payload},
  };
  write_payload(payload_path(manifest_path, payload), tokens.data);
  write_text(manifest_path, doc.dump(2));
}

TokenSequence load_token_sequence(const std::filesystem::path& manifest_path) {
  const json doc = read_json(manifest_path);
  if (!doc.contains("tokens")) {
    return to_sequence(load_token_set(manifest_path));
  }
  TokenSequence seq;
  seq.dim = require<int>(doc, "dim", manifest_path);
  seq.num_frames = require<int>(doc, "num_frames", manifest_path);
  seq.grid_rows = require<int>(doc, "grid_rows", manifest_path);
  seq.grid_cols = require<int>(doc, "grid_cols", manifest_path);
  const auto dtype = require<std::string>(doc, "dtype", manifest_path);
  if (dtype != "f32le") {
    throw IoError("unsupported dtype '" + dtype + "' in " +
                  manifest_path.string());
  }
  const json& token_list = doc.at("tokens");
  if (!token_list.is_array() || token_list.empty()) {
    throw IoError("manifest " + manifest_path.string() +
                  " has an empty or invalid tokens array");
  }
  seq.indices.reserve(token_list.size());
  for (const json& entry : token_list) {
    seq.indices.push_back(token_index_from_json(entry, manifest_path));
  }
  const auto payload = require<std::string>(doc, "payload", manifest_path);
  const std::vector<float> data =
      read_payload(payload_path(manifest_path, payload),
                   seq.indices.size() * static_cast<std::size_t>(seq.dim));
  seq.vectors.resize(static_cast<Eigen::Index>(seq.indices.size()), seq.dim);
  for (std::size_t t = 0; t < seq.indices.size(); ++t) {
    for (int c = 0; c < seq.dim; ++c) {
      seq.vectors(static_cast<Eigen::Index>(t), c) =
          static_cast<double>(data[t * seq.dim + c]);
    }
  }
  seq.validate();
  return seq;
}

void save_token_sequence(const TokenSequence& sequence,
                         const std::filesystem::path& manifest_path) {
  sequence.validate();
  json token_list = json::array();
  for (const TokenIndex& index : sequence.indices) {
    token_list.push_back(token_index_to_json(index));
  }
  const std::string payload = default_payload_name(manifest_path);
  json doc{
      {"dim", sequence.dim},
      {"num_frames", sequence.num_frames},
      {"grid_rows", sequence.grid_rows},
      {"grid_cols", sequence.grid_cols},
      {"dtype", "f32le"},
      {"payload", payload},
      {"tokens", std::move(token_list)},
  };
  std::vector<float> data(sequence.size() *
                          static_cast<std::size_t>(sequence.dim));
  for (std::size_t t = 0; t < sequence.size(); ++t) {
    for (int c = 0; c < sequence.dim; ++c) {
      data[t * sequence.dim + c] =
          static_cast<float>(sequence.vectors(static_cast<Eigen::Index>(t), c));
    }
  }
  write_payload(payload_path(manifest_path, payload), data);
  write_text(manifest_path, doc.dump(2));
}

ClusterResult load_cluster_result(const std::filesystem::path& path) {
  const json doc = read_json(path);
  ClusterResult result;
  result.meta.algorithm = require<std::string>(doc, "algorithm", path);
  result.meta.segments = require<int>(doc, "segments", path);
  result.meta.clusters = require<int>(doc, "clusters", path);
  result.meta.sigma = require<double>(doc, "sigma", path);
  result.meta.knn = require<int>(doc, "knn", path);
  result.meta.normalize = require<bool>(doc, "normalize", path);
  result.meta.max_iterations = require<int>(doc, "max_iterations", path);
  result.meta.block_tag = require<int>(doc, "block_tag", path);
  if (!doc.contains("segment_results") || !doc.at("segment_results").is_array()) {
    throw IoError("document " + path.string() + " lacks segment_results");
  }
  for (const json& seg_doc : doc.at("segment_results")) {
    SegmentClusters seg;
    for (const json& entry : seg_doc.value("centers", json::array())) {
      seg.centers.push_back(token_index_from_json(entry, path));
    }
    for (const json& entry : seg_doc.value("tokens", json::array())) {
      seg.tokens.push_back(token_index_from_json(entry, path));
    }
    try {
      seg.labels = seg_doc.value("labels", std::vector<int>{});
      seg.iterations_run = require<int>(seg_doc, "iterations_run", path);
      seg.final_cost = require<double>(seg_doc, "final_cost", path);
    } catch (const json::exception& e) {
      throw IoError("document " + path.string() + " has a bad segment: " +
                    e.what());
    }
    result.segments.push_back(std::move(seg));
  }
  result.validate();
  return result;
}

void save_cluster_result(const ClusterResult& result,
                         const std::filesystem::path& path) {
  result.validate();
  json segments = json::array();
  for (const SegmentClusters& seg : result.segments) {
    json centers = json::array();
    for (const TokenIndex& index : seg.centers) {
      centers.push_back(token_index_to_json(index));
    }
    json tokens = json::array();
    for (const TokenIndex& index : seg.tokens) {
      tokens.push_back(token_index_to_json(index));
    }
    segments.push_back(json{
        {"centers", std::move(centers)},
        {"tokens", std::move(tokens)},
        {"labels", seg.labels},
        {"iterations_run", seg.iterations_run},
        {"final_cost", seg.final_cost},
    });
  }
  const json doc{
      {"algorithm", result.meta.algorithm},
      {"segments", result.meta.segments},
      {"clusters", result.meta.clusters},
      {"sigma", result.meta.sigma},
      {"knn", result.meta.knn},
      {"normalize", result.meta.normalize},
      {"max_iterations", result.meta.max_iterations},
      {"block_tag", result.meta.block_tag},
      {"segment_results", std::move(segments)},
  };
  write_text(path, doc.dump(2));
}

}  // namespace tokclust
