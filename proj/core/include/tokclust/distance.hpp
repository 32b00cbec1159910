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

#include <Eigen/Core>

#include "tokclust/types.hpp"

namespace tokclust {

enum class MetricKind { squared_euclidean };

// Distance configuration shared by both clustering algorithms. Embeddings are
// clustered as-is by default; pre_normalize projects inputs onto the unit
// sphere first.
struct Metric {
  MetricKind kind = MetricKind::squared_euclidean;
  bool pre_normalize = false;
};

// Sum of squared component differences, accumulated in double with a fixed
// ascending-component order so results are reproducible bit for bit.
double squared_distance(Eigen::Ref<const Eigen::VectorXd> x,
                        Eigen::Ref<const Eigen::VectorXd> y,
                        const Metric& metric = {});

// exp(-||x - y||^2 / (2 sigma^2)). Equals 1 iff x == y; sigma must be > 0.
double gaussian_similarity(Eigen::Ref<const Eigen::VectorXd> x,
                           Eigen::Ref<const Eigen::VectorXd> y, double sigma);

// Materializes the points the metric actually measures: a row-normalized copy
// when pre_normalize is set (zero rows kept as zero), the input otherwise.
RowMatrixXd metric_points(const RowMatrixXd& points, const Metric& metric);

}  // namespace tokclust
