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

#include <vector>

#include "tokclust/distance.hpp"
#include "tokclust/types.hpp"

namespace tokclust {

struct KMedoidsConfig {
  int k = 1;
  int max_iterations = 50;
  Metric metric{};
};

// Result of a partitioning run. medoid_indices is filled in medoid mode
// (every entry indexes an input point and carries its own label); it stays
// empty for plain k-means, whose centers are means. centers holds the final
// center vectors in the space the algorithm ran in. final_cost is the sum of
// squared distances from each point to its center.
struct PartitionOutcome {
  std::vector<int> medoid_indices;
  RowMatrixXd centers;
  std::vector<int> labels;
  int iterations_run = 0;
  double final_cost = 0.0;
};

// Deterministic farthest-point seeding: the max-norm point first, then
// repeatedly the point whose min distance to the chosen set is largest.
// All ties break toward the lowest index.
std::vector<int> kkz_init(const RowMatrixXd& points, int k,
                          const Metric& metric = {});

// KKZ-seeded alternating partitioning with medoid snapping: assign points to
// the nearest medoid, then per cluster replace the medoid with the member
// nearest the cluster mean. Stops when the medoids reach a fixed point or at
// max_iterations. Fully deterministic.
PartitionOutcome kmedoids_pp(const RowMatrixXd& points,
                             const KMedoidsConfig& config);

// Plain alternating k-means with true means as centers, also KKZ-seeded so
// repeated runs agree. Clusters that lose all members keep their previous
// center.
PartitionOutcome kmeans(const RowMatrixXd& points, const KMedoidsConfig& config);

}  // namespace tokclust
