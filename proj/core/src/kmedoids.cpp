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

#include "tokclust/kmedoids.hpp"

#include <limits>
#include <sstream>
#include <stdexcept>

#include "tokclust/errors.hpp"

namespace tokclust {
namespace {

double row_squared_distance(const RowMatrixXd& points, Eigen::Index a,
                            Eigen::Index b) {
  double acc = 0.0;
  for (Eigen::Index c = 0; c < points.cols(); ++c) {
    const double diff = points(a, c) - points(b, c);
    acc += diff * diff;
  }
  return acc;
}

double to_center_squared_distance(const RowMatrixXd& points, Eigen::Index a,
                                  const RowMatrixXd& centers, Eigen::Index j) {
  double acc = 0.0;
  for (Eigen::Index c = 0; c < points.cols(); ++c) {
    const double diff = points(a, c) - centers(j, c);
    acc += diff * diff;
  }
  return acc;
}

void check_partition_args(const RowMatrixXd& points,
                          const KMedoidsConfig& config) {
  if (points.rows() == 0) {
    throw ValidationError("cannot partition an empty point set");
  }
  if (config.k < 1 || config.k > points.rows()) {
    std::ostringstream out;
    out << "cluster count " << config.k << " must be in [1, " << points.rows()
        << "]";
    throw ValidationError(out.str());
  }
  if (config.max_iterations < 1) {
    throw ValidationError("max_iterations must be positive");
  }
}

// KKZ on already metric-transformed points.
std::vector<int> kkz_core(const RowMatrixXd& points, int k) {
  const Eigen::Index m = points.rows();
  std::vector<int> chosen;
  chosen.reserve(k);
  std::vector<char> selected(m, 0);

  int first = 0;
  double best_norm = -1.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    double norm2 = 0.0;
    for (Eigen::Index c = 0; c < points.cols(); ++c) {
      norm2 += points(i, c) * points(i, c);
    }
    if (norm2 > best_norm) {
      best_norm = norm2;
      first = static_cast<int>(i);
    }
  }
  chosen.push_back(first);
  selected[first] = 1;

  std::vector<double> min_dist(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    min_dist[i] = row_squared_distance(points, i, first);
  }
  while (static_cast<int>(chosen.size()) < k) {
    int next = -1;
    double best = -1.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (!selected[i] && min_dist[i] > best) {
        best = min_dist[i];
        next = static_cast<int>(i);
      }
    }
    chosen.push_back(next);
    selected[next] = 1;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (!selected[i]) {
        const double d = row_squared_distance(points, i, next);
        if (d < min_dist[i]) {
          min_dist[i] = d;
        }
      }
    }
  }
  return chosen;
}

struct AssignResult {
  std::vector<int> labels;
  std::vector<double> best_dist;
  double cost = 0.0;
};

// Step 2: nearest center per point, ties toward the lowest cluster id.
// `pin` (optional) maps a point that is itself a medoid to its own cluster,
// which only matters when two medoids coincide. When prev_labels is given,
// verifies the reassignment never increased cost under the current centers.
AssignResult assign_points(const RowMatrixXd& points, const RowMatrixXd& centers,
                           const std::vector<int>* pin,
                           const std::vector<int>* prev_labels) {
  const Eigen::Index m = points.rows();
  const Eigen::Index k = centers.rows();
  AssignResult res;
  res.labels.resize(m);
  res.best_dist.resize(m);
  double prev_cost = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    int best_j = -1;
    double best_d = std::numeric_limits<double>::infinity();
    double prev_d = 0.0;
    for (Eigen::Index j = 0; j < k; ++j) {
      const double d = to_center_squared_distance(points, i, centers, j);
      if (d < best_d) {
        best_d = d;
        best_j = static_cast<int>(j);
      }
      if (prev_labels != nullptr && static_cast<int>(j) == (*prev_labels)[i]) {
        prev_d = d;
      }
    }
    if (pin != nullptr && (*pin)[i] >= 0) {
      best_j = (*pin)[i];
      best_d = to_center_squared_distance(points, i, centers, best_j);
    }
    res.labels[i] = best_j;
    res.best_dist[i] = best_d;
    res.cost += best_d;
    if (prev_labels != nullptr) {
      prev_cost += prev_d;
    }
  }
  if (prev_labels != nullptr && res.cost > prev_cost) {
    throw std::logic_error("assignment step increased the partition cost");
  }
  return res;
}

std::vector<std::vector<int>> cluster_members(const std::vector<int>& labels,
                                              int k) {
  std::vector<std::vector<int>> members(k);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    members[labels[i]].push_back(static_cast<int>(i));
  }
  return members;
}

Eigen::VectorXd member_mean(const RowMatrixXd& points,
                            const std::vector<int>& members) {
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(points.cols());
  for (int i : members) {
    for (Eigen::Index c = 0; c < points.cols(); ++c) {
      mean(c) += points(i, c);
    }
  }
  mean /= static_cast<double>(members.size());
  return mean;
}

double to_vector_squared_distance(const RowMatrixXd& points, Eigen::Index a,
                                  const Eigen::VectorXd& v) {
  double acc = 0.0;
  for (Eigen::Index c = 0; c < points.cols(); ++c) {
    const double diff = points(a, c) - v(c);
    acc += diff * diff;
  }
  return acc;
}

}  // namespace

std::vector<int> kkz_init(const RowMatrixXd& points, int k,
                          const Metric& metric) {
  if (points.rows() == 0) {
    throw ValidationError("kkz_init requires a non-empty point set");
  }
  if (k < 1 || k > points.rows()) {
    std::ostringstream out;
    out << "kkz_init cluster count " << k << " must be in [1, " << points.rows()
        << "]";
    throw ValidationError(out.str());
  }
  const RowMatrixXd effective = metric_points(points, metric);
  return kkz_core(effective, k);
}

PartitionOutcome kmedoids_pp(const RowMatrixXd& points,
                             const KMedoidsConfig& config) {
  check_partition_args(points, config);
  const RowMatrixXd pts = metric_points(points, config.metric);
  const Eigen::Index m = pts.rows();
  const int k = config.k;

  std::vector<int> medoids = kkz_core(pts, k);
  RowMatrixXd centers(k, pts.cols());
  std::vector<int> pin(m, -1);
  auto refresh_centers = [&]() {
    std::fill(pin.begin(), pin.end(), -1);
    for (int j = 0; j < k; ++j) {
      centers.row(j) = pts.row(medoids[j]);
      pin[medoids[j]] = j;
    }
  };
  refresh_centers();

  AssignResult assigned;
  std::vector<int> prev_labels;
  int iterations = 0;
  for (int it = 1; it <= config.max_iterations; ++it) {
    assigned = assign_points(pts, centers, &pin,
                             prev_labels.empty() ? nullptr : &prev_labels);
    iterations = it;
    if (it == config.max_iterations) {
      break;
    }
    // Step 3: per-cluster mean, snapped to the nearest member. Clusters with
    // no members keep their medoid.
    std::vector<int> new_medoids = medoids;
    const auto members = cluster_members(assigned.labels, k);
    for (int j = 0; j < k; ++j) {
      if (members[j].empty()) {
        continue;
      }
      const Eigen::VectorXd mean = member_mean(pts, members[j]);
      int snap = members[j].front();
      double best = std::numeric_limits<double>::infinity();
      for (int i : members[j]) {
        const double d = to_vector_squared_distance(pts, i, mean);
        if (d < best) {
          best = d;
          snap = i;
        }
      }
      new_medoids[j] = snap;
    }
    if (new_medoids == medoids) {
      break;  // fixed point: the next assignment could not change any label
    }
    medoids = std::move(new_medoids);
    refresh_centers();
    prev_labels = assigned.labels;
  }

  PartitionOutcome outcome;
  outcome.medoid_indices = std::move(medoids);
  outcome.centers = std::move(centers);
  outcome.labels = std::move(assigned.labels);
  outcome.iterations_run = iterations;
  outcome.final_cost = assigned.cost;
  return outcome;
}

PartitionOutcome kmeans(const RowMatrixXd& points, const KMedoidsConfig& config) {
  check_partition_args(points, config);
  const RowMatrixXd pts = metric_points(points, config.metric);
  const int k = config.k;

  const std::vector<int> seeds = kkz_core(pts, k);
  RowMatrixXd centers(k, pts.cols());
  for (int j = 0; j < k; ++j) {
    centers.row(j) = pts.row(seeds[j]);
  }

  AssignResult assigned;
  std::vector<int> prev_labels;
  int iterations = 0;
  for (int it = 1; it <= config.max_iterations; ++it) {
    assigned = assign_points(pts, centers, nullptr,
                             prev_labels.empty() ? nullptr : &prev_labels);
    iterations = it;
    if (it == config.max_iterations) {
      break;
    }
    RowMatrixXd new_centers = centers;
    const auto members = cluster_members(assigned.labels, k);
    for (int j = 0; j < k; ++j) {
      if (!members[j].empty()) {
        new_centers.row(j) = member_mean(pts, members[j]);
      }
    }
    if (((new_centers.array() == centers.array()).all())) {
      break;
    }
    centers = std::move(new_centers);
    prev_labels = assigned.labels;
  }

  PartitionOutcome outcome;
  outcome.centers = std::move(centers);
  outcome.labels = std::move(assigned.labels);
  outcome.iterations_run = iterations;
  outcome.final_cost = assigned.cost;
  return outcome;
}

}  // namespace tokclust
