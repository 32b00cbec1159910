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

#include "tokclust/types.hpp"

#include <cmath>
#include <sstream>

#include "tokclust/errors.hpp"

namespace tokclust {

std::string to_string(const TokenIndex& index) {
  std::ostringstream out;
  out << "(frame=" << index.frame << ", row=" << index.row
      << ", col=" << index.col << ")";
  return out.str();
}

std::size_t TokenSet::flat_index(const TokenIndex& index) const {
  return (static_cast<std::size_t>(index.frame) * grid_rows + index.row) *
             grid_cols +
         index.col;
}

TokenIndex TokenSet::index_at(std::size_t flat) const {
  const std::size_t per_frame = static_cast<std::size_t>(tokens_per_frame);
  TokenIndex index;
  index.frame = static_cast<int>(flat / per_frame);
  const std::size_t within = flat % per_frame;
  index.row = static_cast<int>(within / grid_cols);
  index.col = static_cast<int>(within % grid_cols);
  return index;
}

void TokenSet::validate() const {
  if (dim <= 0 || num_frames <= 0 || tokens_per_frame <= 0 || grid_rows <= 0 ||
      grid_cols <= 0) {
    throw ValidationError("token set shape values must be positive");
  }
  if (grid_rows * grid_cols != tokens_per_frame) {
    std::ostringstream out;
    out << "grid_rows * grid_cols (" << grid_rows << " * " << grid_cols
        << ") must equal tokens_per_frame (" << tokens_per_frame << ")";
    throw ValidationError(out.str());
  }
  const std::size_t expected = token_count() * dim;
  if (data.size() != expected) {
    std::ostringstream out;
    out << "token data holds " << data.size() << " floats, expected "
        << expected;
    throw ValidationError(out.str());
  }
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!std::isfinite(data[i])) {
      const std::size_t token = i / dim;
      std::ostringstream out;
      out << "non-finite value at token " << to_string(index_at(token))
          << " component " << (i % dim);
      throw ValidationError(out.str());
    }
  }
}

SegmentSpec make_segment_spec(int num_frames, int num_segments) {
  if (num_segments <= 0) {
    throw ValidationError("segment count must be positive");
  }
  if (num_frames <= 0 || num_frames % num_segments != 0) {
    std::ostringstream out;
    out << "segment count " << num_segments << " must divide frame count "
        << num_frames << " exactly";
    throw ValidationError(out.str());
  }
  return SegmentSpec{num_segments, num_frames / num_segments};
}

void TokenSequence::validate() const {
  if (dim <= 0 || num_frames <= 0 || grid_rows <= 0 || grid_cols <= 0) {
    throw ValidationError("token sequence shape values must be positive");
  }
  if (static_cast<std::size_t>(vectors.rows()) != indices.size() ||
      vectors.cols() != dim) {
    throw ValidationError("token sequence vectors do not match index count");
  }
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const TokenIndex& index = indices[i];
    if (index.frame < 0 || index.frame >= num_frames || index.row < 0 ||
        index.row >= grid_rows || index.col < 0 || index.col >= grid_cols) {
      throw ValidationError("token index out of range: " + to_string(index));
    }
    if (i > 0 && !(indices[i - 1] < index)) {
      throw ValidationError("token sequence not strictly ascending at " +
                            to_string(index));
    }
  }
  if (!segment_offsets.empty()) {
    if (segment_offsets.front() != 0 || segment_offsets.back() != size()) {
      throw ValidationError("segment offsets must span the whole sequence");
    }
    for (std::size_t s = 1; s < segment_offsets.size(); ++s) {
      if (segment_offsets[s] <= segment_offsets[s - 1]) {
        throw ValidationError("segment offsets must be strictly increasing");
      }
    }
  }
}

TokenSequence to_sequence(const TokenSet& tokens) {
  tokens.validate();
  TokenSequence seq;
  seq.dim = tokens.dim;
  seq.num_frames = tokens.num_frames;
  seq.grid_rows = tokens.grid_rows;
  seq.grid_cols = tokens.grid_cols;
  const std::size_t count = tokens.token_count();
  seq.indices.resize(count);
  seq.vectors.resize(static_cast<Eigen::Index>(count), tokens.dim);
  for (std::size_t t = 0; t < count; ++t) {
    seq.indices[t] = tokens.index_at(t);
    for (int c = 0; c < tokens.dim; ++c) {
      seq.vectors(static_cast<Eigen::Index>(t), c) =
          static_cast<double>(tokens.data[t * tokens.dim + c]);
    }
  }
  return seq;
}

void ClusterResult::validate() const {
  if (segments.empty()) {
    throw ValidationError("cluster result has no segments");
  }
  if (meta.algorithm != "kmedoids" && meta.algorithm != "spectral") {
    throw ValidationError("unknown algorithm name: " + meta.algorithm);
  }
  const std::size_t k = static_cast<std::size_t>(meta.clusters);
  for (std::size_t s = 0; s < segments.size(); ++s) {
    const SegmentClusters& seg = segments[s];
    if (seg.centers.size() != k) {
      throw ValidationError("segment " + std::to_string(s) +
                            " does not hold exactly K centers");
    }
    if (seg.labels.size() != seg.tokens.size() || seg.tokens.empty()) {
      throw ValidationError("segment " + std::to_string(s) +
                            " has mismatched token/label arrays");
    }
    for (std::size_t c = 1; c < seg.centers.size(); ++c) {
      if (!(seg.centers[c - 1] < seg.centers[c])) {
        throw ValidationError("segment " + std::to_string(s) +
                              " centers not in canonical order");
      }
    }
    for (std::size_t t = 1; t < seg.tokens.size(); ++t) {
      if (!(seg.tokens[t - 1] < seg.tokens[t])) {
        throw ValidationError("segment " + std::to_string(s) +
                              " tokens not in canonical order");
      }
    }
    std::vector<bool> center_seen(k, false);
    for (std::size_t t = 0; t < seg.tokens.size(); ++t) {
      const int label = seg.labels[t];
      if (label < 0 || static_cast<std::size_t>(label) >= k) {
        throw ValidationError("segment " + std::to_string(s) +
                              " label out of range");
      }
      if (!center_seen[label] && seg.tokens[t] == seg.centers[label]) {
        center_seen[label] = true;
      }
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (!center_seen[c]) {
        throw ValidationError("segment " + std::to_string(s) + " center " +
                              to_string(seg.centers[c]) +
                              " is not a member of its own cluster");
      }
    }
  }
}

}  // namespace tokclust
