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
//
// Brute-force reference implementations the test suites check the library
// against. Everything here is written from the definitions, independent of
// the code paths under test.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "tokclust/types.hpp"

namespace tokclust::testing {

// Deterministic RNG for test instances (splitmix64 + Box-Muller).
class TestRng {
 public:
  explicit TestRng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  double uniform01() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Inclusive bounds.
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  double normal() {
    const double u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t state_;
};

inline RowMatrixXd random_points(TestRng& rng, int m, int d, double lo = -5.0,
                                 double hi = 5.0) {
  RowMatrixXd points(m, d);
  for (int i = 0; i < m; ++i) {
    for (int c = 0; c < d; ++c) {
      points(i, c) = rng.uniform(lo, hi);
    }
  }
  return points;
}

inline double oracle_squared_distance(const RowMatrixXd& points, int a, int b) {
  double acc = 0.0;
  for (Eigen::Index c = 0; c < points.cols(); ++c) {
    const double diff = points(a, c) - points(b, c);
    acc += diff * diff;
  }
  return acc;
}

// Farthest-point seeding replayed from the definition: max-norm point first,
// then the unselected point with the largest min distance to the chosen set.
inline std::vector<int> oracle_kkz(const RowMatrixXd& points, int k) {
  const int m = static_cast<int>(points.rows());
  std::vector<int> chosen;
  std::vector<bool> used(m, false);
  int best = 0;
  double best_norm = -1.0;
  for (int i = 0; i < m; ++i) {
    double norm2 = 0.0;
    for (Eigen::Index c = 0; c < points.cols(); ++c) {
      norm2 += points(i, c) * points(i, c);
    }
    if (norm2 > best_norm) {
      best_norm = norm2;
      best = i;
    }
  }
  chosen.push_back(best);
  used[best] = true;
  while (static_cast<int>(chosen.size()) < k) {
    int arg = -1;
    double arg_dist = -1.0;
    for (int i = 0; i < m; ++i) {
      if (used[i]) {
        continue;
      }
      double min_dist = std::numeric_limits<double>::infinity();
      for (int s : chosen) {
        min_dist = std::min(min_dist, oracle_squared_distance(points, i, s));
      }
      if (min_dist > arg_dist) {
        arg_dist = min_dist;
        arg = i;
      }
    }
    chosen.push_back(arg);
    used[arg] = true;
  }
  return chosen;
}

// Cost of serving every point from its nearest center in the given set.
inline double oracle_assignment_cost(const RowMatrixXd& points,
                                     const std::vector<int>& centers) {
  double cost = 0.0;
  for (int i = 0; i < points.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (int c : centers) {
      best = std::min(best, oracle_squared_distance(points, i, c));
    }
    cost += best;
  }
  return cost;
}

// Exhaustive optimum over all k-subsets of points used as medoids.
inline double oracle_best_medoid_cost(const RowMatrixXd& points, int k) {
  const int m = static_cast<int>(points.rows());
  std::vector<int> subset(k);
  double best = std::numeric_limits<double>::infinity();
  const auto recurse = [&](auto&& self, int start, int depth) -> void {
    if (depth == k) {
      best = std::min(best, oracle_assignment_cost(points, subset));
      return;
    }
    for (int i = start; i <= m - (k - depth); ++i) {
      subset[depth] = i;
      self(self, i + 1, depth + 1);
    }
  };
  recurse(recurse, 0, 0);
  return best;
}

// Exhaustive optimum over all 2-partitions, cost measured to cluster means.
inline double oracle_best_two_partition_cost(const RowMatrixXd& points) {
  const int m = static_cast<int>(points.rows());
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 1; mask < (1u << m) - 1u; ++mask) {
    Eigen::VectorXd mean0 = Eigen::VectorXd::Zero(points.cols());
    Eigen::VectorXd mean1 = Eigen::VectorXd::Zero(points.cols());
    int n0 = 0;
    int n1 = 0;
    for (int i = 0; i < m; ++i) {
      if (mask & (1u << i)) {
        mean1 += points.row(i).transpose();
        ++n1;
      } else {
        mean0 += points.row(i).transpose();
        ++n0;
      }
    }
    mean0 /= n0;
    mean1 /= n1;
    double cost = 0.0;
    for (int i = 0; i < m; ++i) {
      const Eigen::VectorXd& mean = (mask & (1u << i)) ? mean1 : mean0;
      cost += (points.row(i).transpose() - mean).squaredNorm();
    }
    best = std::min(best, cost);
  }
  return best;
}

// Connected components of a weighted graph (edge iff weight > 0).
inline int oracle_component_count(const Eigen::MatrixXd& weights) {
  const int m = static_cast<int>(weights.rows());
  std::vector<int> component(m, -1);
  int count = 0;
  std::vector<int> stack;
  for (int start = 0; start < m; ++start) {
    if (component[start] >= 0) {
      continue;
    }
    stack.push_back(start);
    component[start] = count;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int u = 0; u < m; ++u) {
        if (component[u] < 0 && weights(v, u) > 0.0) {
          component[u] = count;
          stack.push_back(u);
        }
      }
    }
    ++count;
  }
  return count;
}

// Sign statistic of one column per the flip definition, recomputed from an
// explicitly assembled residual matrix.
inline double oracle_sign_stat(const Eigen::MatrixXd& matrix,
                               const Eigen::MatrixXd& vectors,
                               const Eigen::VectorXd& eigenvalues,
                               Eigen::Index col) {
  Eigen::MatrixXd residual = matrix;
  for (Eigen::Index i = 0; i < vectors.cols(); ++i) {
    if (i != col) {
      residual -= eigenvalues(i) * vectors.col(i) * vectors.col(i).transpose();
    }
  }
  double stat = 0.0;
  for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
    const double proj = vectors.col(col).dot(residual.col(j));
    if (proj > 0.0) {
      stat += proj * proj;
    } else if (proj < 0.0) {
      stat -= proj * proj;
    }
  }
  return stat;
}

// Random symmetric positive semidefinite matrix.
inline Eigen::MatrixXd random_psd(TestRng& rng, int m) {
  Eigen::MatrixXd a(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      a(i, j) = rng.uniform(-1.0, 1.0);
    }
  }
  return (a * a.transpose()) / static_cast<double>(m);
}

}  // namespace tokclust::testing
