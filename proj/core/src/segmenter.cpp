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

#include "tokclust/segmenter.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <utility>

#include "tokclust/distance.hpp"
#include "tokclust/errors.hpp"
#include "tokclust/kmedoids.hpp"
#include "tokclust/spectral.hpp"

namespace tokclust {
namespace {

int distinct_frames(const std::vector<TokenIndex>& indices, std::size_t begin,
                    std::size_t end) {
  int count = 1;
  for (std::size_t i = begin + 1; i < end; ++i) {
    if (indices[i].frame != indices[i - 1].frame) {
      ++count;
    }
  }
  return count;
}

const char* algorithm_name(Algorithm algorithm) {
  return algorithm == Algorithm::kmedoids ? "kmedoids" : "spectral";
}

StageOutcome cluster_sequence_impl(const TokenSequence& sequence,
                                   const StageConfig& stage) {
  sequence.validate();
  const std::size_t total = sequence.size();
  const int s = stage.segments;
  if (s < 1) {
    throw ValidationError("segment count must be positive");
  }
  if (total % static_cast<std::size_t>(s) != 0) {
    std::ostringstream out;
    out << "segment count " << s << " must divide the token count " << total;
    throw ValidationError(out.str());
  }
  const std::size_t chunk = total / s;
  for (int seg = 1; seg < s; ++seg) {
    const std::size_t cut = chunk * seg;
    if (sequence.indices[cut - 1].frame >= sequence.indices[cut].frame) {
      std::ostringstream out;
      out << "segment boundary at token " << cut << " splits frame "
          << sequence.indices[cut].frame;
      throw ValidationError(out.str());
    }
  }
  const int k = stage.clusters;
  if (k < 1 || static_cast<std::size_t>(k) > chunk) {
    std::ostringstream out;
    out << "cluster count " << k << " must be in [1, " << chunk
        << "] (tokens per segment)";
    throw ValidationError(out.str());
  }
  if (stage.max_iterations < 1) {
    throw ValidationError("max_iterations must be positive");
  }
  if (stage.algorithm == Algorithm::spectral && stage.knn > 0 &&
      static_cast<std::size_t>(stage.knn) >= chunk) {
    std::ostringstream out;
    out << "knn " << stage.knn << " must be below the segment token count "
        << chunk;
    throw ValidationError(out.str());
  }

  StageOutcome outcome;
  ClusterResult& result = outcome.result;
  result.meta.algorithm = algorithm_name(stage.algorithm);
  result.meta.segments = s;
  result.meta.clusters = k;
  result.meta.sigma = stage.sigma;
  result.meta.knn = 0;
  result.meta.normalize = stage.normalize;
  result.meta.max_iterations = stage.max_iterations;
  result.meta.block_tag = stage.block_tag;

  TokenSequence& reduced = outcome.reduced;
  reduced.dim = sequence.dim;
  reduced.num_frames = sequence.num_frames;
  reduced.grid_rows = sequence.grid_rows;
  reduced.grid_cols = sequence.grid_cols;
  reduced.indices.reserve(static_cast<std::size_t>(s) * k);
  reduced.vectors.resize(static_cast<Eigen::Index>(s) * k, sequence.dim);
  reduced.segment_offsets.resize(s + 1);

  for (int seg = 0; seg < s; ++seg) {
    const std::size_t offset = chunk * seg;
    RowMatrixXd points =
        sequence.vectors.middleRows(static_cast<Eigen::Index>(offset),
                                    static_cast<Eigen::Index>(chunk));
    if (stage.normalize) {
      points = metric_points(points, Metric{MetricKind::squared_euclidean, true});
    }

    PartitionOutcome part;
    if (stage.algorithm == Algorithm::kmedoids) {
      KMedoidsConfig config;
      config.k = k;
      config.max_iterations = stage.max_iterations;
      part = kmedoids_pp(points, config);
    } else {
      SpectralConfig config;
      config.k = k;
      config.sigma = stage.sigma;
      config.kmeans.k = k;
      config.kmeans.max_iterations = stage.max_iterations;
      const int frames = distinct_frames(sequence.indices, offset, offset + chunk);
      config.knn = stage.knn > 0
                       ? stage.knn
                       : std::min<int>(5 * frames, static_cast<int>(chunk) - 1);
      if (seg == 0) {
        result.meta.knn = config.knn;
      }
      part = spectral_cluster(points, config);
    }

    // Cluster ids are renumbered so cluster j is the one whose center comes
    // j-th in canonical token order (ascending local index).
    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return part.medoid_indices[a] < part.medoid_indices[b];
    });
    std::vector<int> rank(k);
    for (int j = 0; j < k; ++j) {
      rank[order[j]] = j;
    }

    SegmentClusters seg_result;
    seg_result.centers.resize(k);
    for (int j = 0; j < k; ++j) {
      seg_result.centers[j] = sequence.indices[offset + part.medoid_indices[order[j]]];
    }
    seg_result.tokens.assign(sequence.indices.begin() + offset,
                             sequence.indices.begin() + offset + chunk);
    seg_result.labels.resize(chunk);
    for (std::size_t t = 0; t < chunk; ++t) {
      seg_result.labels[t] = rank[part.labels[t]];
    }
    seg_result.iterations_run = part.iterations_run;
    seg_result.final_cost = part.final_cost;
    result.segments.push_back(std::move(seg_result));

    reduced.segment_offsets[seg] = static_cast<std::size_t>(seg) * k;
    for (int j = 0; j < k; ++j) {
      const std::size_t source = offset + part.medoid_indices[order[j]];
      reduced.indices.push_back(sequence.indices[source]);
      reduced.vectors.row(static_cast<Eigen::Index>(seg) * k + j) =
          sequence.vectors.row(static_cast<Eigen::Index>(source));
    }
  }
  reduced.segment_offsets[s] = static_cast<std::size_t>(s) * k;

  result.validate();
  reduced.validate();
  return outcome;
}

}  // namespace

StageOutcome cluster_segments(const TokenSet& tokens, const StageConfig& stage) {
  tokens.validate();
  make_segment_spec(tokens.num_frames, stage.segments);
  return cluster_sequence_impl(to_sequence(tokens), stage);
}

StageOutcome cluster_sequence(const TokenSequence& sequence,
                              const StageConfig& stage) {
  return cluster_sequence_impl(sequence, stage);
}

PlanOutcome run_plan(const TokenSet& tokens, const ClusteringPlan& plan) {
  PlanOutcome outcome;
  if (plan.stages.empty()) {
    outcome.final = to_sequence(tokens);
    return outcome;
  }
  StageOutcome stage = cluster_segments(tokens, plan.stages.front());
  outcome.stage_results.push_back(std::move(stage.result));
  TokenSequence current = std::move(stage.reduced);
  for (std::size_t i = 1; i < plan.stages.size(); ++i) {
    StageOutcome next = cluster_sequence(current, plan.stages[i]);
    outcome.stage_results.push_back(std::move(next.result));
    current = std::move(next.reduced);
  }
  outcome.final = std::move(current);
  return outcome;
}

ReductionReport reduction_report(std::size_t tokens_before,
                                 std::size_t tokens_after) {
  if (tokens_before == 0) {
    throw ValidationError("reduction report requires a non-empty input");
  }
  ReductionReport report;
  report.tokens_before = tokens_before;
  report.tokens_after = tokens_after;
  const double ratio =
      static_cast<double>(tokens_after) / static_cast<double>(tokens_before);
  report.token_reduction_ratio = 1.0 - ratio;
  report.attention_cost_ratio = ratio * ratio;
  return report;
}

ReductionReport reduction_report(const TokenSet& before,
                                 const TokenSequence& after) {
  return reduction_report(before.token_count(), after.size());
}

}  // namespace tokclust
