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

#include "tokclust/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>
#include <vector>

#include <Eigen/Dense>

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

}  // namespace

SimilarityGraph build_knn_graph(const RowMatrixXd& points, int knn,
                                double sigma) {
  const Eigen::Index m = points.rows();
  if (m == 0) {
    throw ValidationError("cannot build a graph over an empty point set");
  }
  if (knn < 1 || knn >= m) {
    std::ostringstream out;
    out << "knn " << knn << " must be in [1, " << m << ")";
    throw ValidationError(out.str());
  }
  if (!(sigma > 0.0)) {
    throw ValidationError("graph construction requires sigma > 0");
  }

  Eigen::MatrixXd dist2 = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      const double d = row_squared_distance(points, i, j);
      dist2(i, j) = d;
      dist2(j, i) = d;
    }
  }

  SimilarityGraph graph;
  graph.weights = Eigen::MatrixXd::Zero(m, m);
  const double denom = 2.0 * sigma * sigma;
  std::vector<std::pair<double, Eigen::Index>> order(m - 1);
  for (Eigen::Index i = 0; i < m; ++i) {
    std::size_t n = 0;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (j != i) {
        order[n++] = {dist2(i, j), j};
      }
    }
    // (distance, index) pairs are unique, so partial_sort is deterministic
    // and ties at the boundary resolve to the lowest index.
    std::partial_sort(order.begin(), order.begin() + knn, order.end());
    for (int r = 0; r < knn; ++r) {
      const Eigen::Index j = order[r].second;
      const double w = std::exp(-dist2(i, j) / denom);
      graph.weights(i, j) = w;
      graph.weights(j, i) = w;
    }
  }
  graph.degrees = graph.weights.rowwise().sum();
  return graph;
}

Eigen::MatrixXd normalized_laplacian(const SimilarityGraph& graph) {
  const Eigen::Index m = graph.weights.rows();
  if (m == 0 || graph.weights.cols() != m ||
      graph.degrees.size() != m) {
    throw ValidationError("similarity graph has inconsistent shapes");
  }
  Eigen::VectorXd inv_sqrt(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    if (!(graph.degrees(i) > 0.0)) {
      throw ValidationError("vertex " + std::to_string(i) +
                            " has zero degree");
    }
    inv_sqrt(i) = 1.0 / std::sqrt(graph.degrees(i));
  }
  Eigen::MatrixXd lap(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    lap(i, i) = 1.0 - graph.weights(i, i) * inv_sqrt(i) * inv_sqrt(i);
    for (Eigen::Index j = i + 1; j < m; ++j) {
      const double v = -graph.weights(i, j) * inv_sqrt(i) * inv_sqrt(j);
      lap(i, j) = v;
      lap(j, i) = v;
    }
  }
  return lap;
}

SpectralEmbedding smallest_eigenvectors(const Eigen::MatrixXd& laplacian,
                                        int k) {
  const Eigen::Index m = laplacian.rows();
  if (m == 0 || laplacian.cols() != m) {
    throw ValidationError("eigendecomposition requires a square matrix");
  }
  if (k < 1 || k > m) {
    throw ValidationError("eigenvector count must be in [1, m]");
  }
  const double asym = (laplacian - laplacian.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10) {
    std::ostringstream out;
    out << "matrix is not symmetric (max deviation " << asym << ")";
    throw ValidationError(out.str());
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian);
  if (solver.info() != Eigen::Success) {
    throw ValidationError("symmetric eigendecomposition failed to converge");
  }
  SpectralEmbedding embedding;
  embedding.vectors = solver.eigenvectors().leftCols(k);
  embedding.eigenvalues = solver.eigenvalues().head(k);
  return embedding;
}

Eigen::MatrixXd sign_flip(const Eigen::MatrixXd& laplacian,
                          const Eigen::MatrixXd& vectors,
                          const Eigen::VectorXd& eigenvalues) {
  const Eigen::Index m = laplacian.rows();
  const Eigen::Index k = vectors.cols();
  if (laplacian.cols() != m || vectors.rows() != m ||
      eigenvalues.size() != k) {
    throw ValidationError("sign_flip shape mismatch");
  }

  // Compute every statistic against the input columns first, then flip.
  std::vector<double> stats(k, 0.0);
  Eigen::MatrixXd residual(m, m);
  for (Eigen::Index col = 0; col < k; ++col) {
    residual = laplacian;
    for (Eigen::Index i = 0; i < k; ++i) {
      if (i != col) {
        residual.noalias() -=
            eigenvalues(i) * vectors.col(i) * vectors.col(i).transpose();
      }
    }
    double s = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
      double proj = 0.0;
      for (Eigen::Index r = 0; r < m; ++r) {
        proj += vectors(r, col) * residual(r, j);
      }
      if (proj > 0.0) {
        s += proj * proj;
      } else if (proj < 0.0) {
        s -= proj * proj;
      }
    }
    stats[col] = s;
  }

  Eigen::MatrixXd corrected = vectors;
  for (Eigen::Index col = 0; col < k; ++col) {
    if (stats[col] < 0.0) {
      corrected.col(col) = -vectors.col(col);
    }
  }
  return corrected;
}

Eigen::MatrixXd normalize_rows(const Eigen::MatrixXd& matrix) {
  Eigen::MatrixXd out = matrix;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    double norm2 = 0.0;
    for (Eigen::Index c = 0; c < out.cols(); ++c) {
      norm2 += out(i, c) * out(i, c);
    }
    if (norm2 > 0.0) {
      out.row(i) /= std::sqrt(norm2);
    }
  }
  return out;
}

PartitionOutcome spectral_cluster(const RowMatrixXd& points,
                                  const SpectralConfig& config) {
  const Eigen::Index m = points.rows();
  if (m == 0) {
    throw ValidationError("cannot cluster an empty point set");
  }
  if (config.k < 1 || config.k > m) {
    std::ostringstream out;
    out << "cluster count " << config.k << " must be in [1, " << m << "]";
    throw ValidationError(out.str());
  }

  if (m == 1) {
    // A single point cannot form a graph; it is trivially its own cluster.
    PartitionOutcome outcome;
    outcome.medoid_indices = {0};
    outcome.centers = points;
    outcome.labels = {0};
    outcome.iterations_run = 0;
    outcome.final_cost = 0.0;
    return outcome;
  }

  const SimilarityGraph graph = build_knn_graph(points, config.knn, config.sigma);
  const Eigen::MatrixXd laplacian = normalized_laplacian(graph);
  const SpectralEmbedding embedding = smallest_eigenvectors(laplacian, config.k);
  const Eigen::MatrixXd corrected =
      sign_flip(laplacian, embedding.vectors, embedding.eigenvalues);
  const Eigen::MatrixXd rows = normalize_rows(corrected);

  KMedoidsConfig km = config.kmeans;
  km.k = config.k;
  RowMatrixXd embedded = rows;
  const PartitionOutcome inner = kmeans(embedded, km);

  // Pull each cluster back to a real input point: the member whose embedding
  // row is nearest the cluster's embedding mean, ties to the lowest index.
  const int k = config.k;
  std::vector<std::vector<int>> members(k);
  for (Eigen::Index i = 0; i < m; ++i) {
    members[inner.labels[i]].push_back(static_cast<int>(i));
  }
  std::vector<int> center_index(k, -1);
  std::vector<char> taken(m, 0);
  for (int j = 0; j < k; ++j) {
    if (members[j].empty()) {
      continue;
    }
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(embedded.cols());
    for (int i : members[j]) {
      for (Eigen::Index c = 0; c < embedded.cols(); ++c) {
        mean(c) += embedded(i, c);
      }
    }
    mean /= static_cast<double>(members[j].size());
    double best = std::numeric_limits<double>::infinity();
    for (int i : members[j]) {
      double d = 0.0;
      for (Eigen::Index c = 0; c < embedded.cols(); ++c) {
        const double diff = embedded(i, c) - mean(c);
        d += diff * diff;
      }
      if (d < best) {
        best = d;
        center_index[j] = i;
      }
    }
    taken[center_index[j]] = 1;
  }
  // Degenerate embeddings (duplicate rows) can leave a cluster empty. Give it
  // the lowest-index point that is not already a center and pin that point's
  // label so every center stays a member of its own cluster.
  std::vector<int> labels = inner.labels;
  for (int j = 0; j < k; ++j) {
    if (center_index[j] >= 0) {
      continue;
    }
    for (Eigen::Index i = 0; i < m; ++i) {
      if (!taken[i]) {
        center_index[j] = static_cast<int>(i);
        taken[i] = 1;
        labels[i] = j;
        break;
      }
    }
  }

  PartitionOutcome outcome;
  outcome.medoid_indices = center_index;
  outcome.centers.resize(k, points.cols());
  for (int j = 0; j < k; ++j) {
    outcome.centers.row(j) = points.row(center_index[j]);
  }
  outcome.labels = std::move(labels);
  outcome.iterations_run = inner.iterations_run;
  double cost = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    cost += row_squared_distance(points, i,
                                 center_index[outcome.labels[i]]);
  }
  outcome.final_cost = cost;
  return outcome;
}

}  // namespace tokclust
