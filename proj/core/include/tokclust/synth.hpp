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

#include <cstdint>
#include <vector>

#include "tokclust/types.hpp"

namespace tokclust {

// Planted-cluster generator: `blobs` Gaussian clusters whose centers sit on
// separation-scaled coordinate axes (so blobs <= dim). Grid positions map to
// blobs round-robin and repeat identically in every frame; each token gets
// fresh jitter noise. Output is byte-identical for a given seed.
struct SynthConfig {
  std::uint64_t seed = 0;
  int blobs = 1;
  int dim = 2;
  int num_frames = 1;
  int grid_rows = 1;
  int grid_cols = 1;
  double separation = 10.0;
  double jitter = 0.1;
};

struct SynthResult {
  TokenSet tokens;
  std::vector<int> labels;  // planted blob id per token, canonical order
};

SynthResult make_planted_blobs(const SynthConfig& config);

}  // namespace tokclust
