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

#include <filesystem>

#include "tokclust/types.hpp"

namespace tokclust {

// Token sets travel as a JSON manifest next to a raw little-endian float32
// payload laid out in canonical (frame, row, col, component) order. The
// manifest keys are dim, num_frames, tokens_per_frame, grid_rows, grid_cols,
// dtype ("f32le") and payload (relative path). Reduced sequences use the same
// scheme plus an explicit "tokens" array of {frame,row,col} entries, so
// cluster outputs can be fed back in as inputs.

TokenSet load_token_set(const std::filesystem::path& manifest_path);
void save_token_set(const TokenSet& tokens,
                    const std::filesystem::path& manifest_path);

// Accepts both manifest flavors: a dense manifest expands to its full
// canonical sequence.
TokenSequence load_token_sequence(const std::filesystem::path& manifest_path);
void save_token_sequence(const TokenSequence& sequence,
                         const std::filesystem::path& manifest_path);

ClusterResult load_cluster_result(const std::filesystem::path& path);
void save_cluster_result(const ClusterResult& result,
                         const std::filesystem::path& path);

}  // namespace tokclust
