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

#include <cstddef>
#include <vector>

#include "tokclust/types.hpp"

namespace tokclust {

enum class Algorithm { kmedoids, spectral };

// One clustering stage. block_tag is experiment bookkeeping carried into the
// output metadata; no transformer runs here. knn = 0 resolves to
// 5 x (frames per segment), capped at one below the segment's token count.
struct StageConfig {
  int block_tag = 0;
  int segments = 1;
  int clusters = 1;
  Algorithm algorithm = Algorithm::kmedoids;
  bool normalize = false;
  int max_iterations = 50;
  double sigma = 2.0;
  int knn = 0;
};

// Stages apply in order; each consumes the previous stage's reduced sequence.
struct ClusteringPlan {
  std::vector<StageConfig> stages;
};

struct StageOutcome {
  ClusterResult result;
  TokenSequence reduced;
};

struct PlanOutcome {
  TokenSequence final;
  std::vector<ClusterResult> stage_results;
};

struct ReductionReport {
  std::size_t tokens_before = 0;
  std::size_t tokens_after = 0;
  double token_reduction_ratio = 0.0;
  double attention_cost_ratio = 1.0;
};

// Clusters each of the stage's S segments independently and keeps only the K
// center tokens per segment, re-assembled in canonical spatio-temporal order.
// S must divide the frame count; K cannot exceed the per-segment token count.
StageOutcome cluster_segments(const TokenSet& tokens, const StageConfig& stage);

// Same operation over an already-reduced sequence: tokens regroup by their
// original frame indices into S contiguous temporal bins of equal token
// count. Cut points that split a frame are an error.
StageOutcome cluster_sequence(const TokenSequence& sequence,
                              const StageConfig& stage);

// Chains the plan's stages. An empty plan returns the input unchanged.
PlanOutcome run_plan(const TokenSet& tokens, const ClusteringPlan& plan);

ReductionReport reduction_report(std::size_t tokens_before,
                                 std::size_t tokens_after);
ReductionReport reduction_report(const TokenSet& before,
                                 const TokenSequence& after);

}  // namespace tokclust
