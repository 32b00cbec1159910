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

#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace tokclust {

// Points are stored one per row; rows stay contiguous so the binary payload
// order and the canonical token order coincide.
using RowMatrixXd =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Original spatio-temporal position of a token. The member order gives the
// canonical (frame, row, col) lexicographic ordering via <=>.
struct TokenIndex {
  int frame = 0;
  int row = 0;
  int col = 0;

  friend auto operator<=>(const TokenIndex&, const TokenIndex&) = default;
};

std::string to_string(const TokenIndex& index);

// A video's patch-token embeddings with their grid geometry. Storage is
// float32 in canonical order (frame outermost, then row, col, component),
// matching the on-disk payload byte for byte. Immutable once built; safe for
// concurrent reads.
struct TokenSet {
  int dim = 0;
  int num_frames = 0;
  int tokens_per_frame = 0;
  int grid_rows = 0;
  int grid_cols = 0;
  std::vector<float> data;

  std::size_t token_count() const {
    return static_cast<std::size_t>(num_frames) * tokens_per_frame;
  }
  std::size_t flat_index(const TokenIndex& index) const;
  TokenIndex index_at(std::size_t flat) const;

  // Throws ValidationError on shape mismatches or non-finite components,
  // naming the first offending token.
  void validate() const;
};

// Partition of a video's frames into contiguous segments of equal length.
struct SegmentSpec {
  int num_segments = 1;
  int frames_per_segment = 1;
};

// Throws ValidationError unless num_segments divides num_frames exactly.
SegmentSpec make_segment_spec(int num_frames, int num_segments);

// An ordered list of tokens (indices plus embedding rows). This is both the
// generic clustering input and the reduced output: segment_offsets is empty
// for a raw sequence and holds S+1 boundaries after a clustering stage.
// Indices are strictly ascending in canonical order.
struct TokenSequence {
  int dim = 0;
  int num_frames = 0;
  int grid_rows = 0;
  int grid_cols = 0;
  std::vector<TokenIndex> indices;
  RowMatrixXd vectors;
  std::vector<std::size_t> segment_offsets;

  std::size_t size() const { return indices.size(); }
  std::size_t segment_count() const {
    return segment_offsets.empty() ? 0 : segment_offsets.size() - 1;
  }
  void validate() const;
};

// Expands a token set into its canonical-order sequence (no segmentation).
TokenSequence to_sequence(const TokenSet& tokens);

// One clustered segment: K centers, the segment's tokens in canonical order,
// and a parallel label array with values in [0, K). Cluster j is centered at
// centers[j]; centers are sorted canonically and each belongs to its own
// cluster.
struct SegmentClusters {
  std::vector<TokenIndex> centers;
  std::vector<TokenIndex> tokens;
  std::vector<int> labels;
  int iterations_run = 0;
  double final_cost = 0.0;
};

struct ClusterMetadata {
  std::string algorithm;  // "kmedoids" or "spectral"
  int segments = 1;
  int clusters = 1;
  double sigma = 2.0;
  int knn = 0;
  bool normalize = false;
  int max_iterations = 50;
  int block_tag = 0;
};

struct ClusterResult {
  ClusterMetadata meta;
  std::vector<SegmentClusters> segments;

  void validate() const;
};

}  // namespace tokclust
