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

#include "tokclust/kmedoids.hpp"
#include "tokclust/types.hpp"

namespace tokclust {

struct SpectralConfig {
  int k = 1;             // clusters
  int knn = 1;           // neighbors per vertex, must stay below the point count
  double sigma = 2.0;    // Gaussian width
  KMedoidsConfig kmeans{};  // settings for the embedding-space k-means
};

// Symmetric weighted adjacency with zero diagonal plus per-vertex degrees.
struct SimilarityGraph {
  Eigen::MatrixXd weights;
  Eigen::VectorXd degrees;
};

// Eigenvectors of the k smallest eigenvalues, columns orthonormal,
// eigenvalues ascending.
struct SpectralEmbedding {
  Eigen::MatrixXd vectors;
  Eigen::VectorXd eigenvalues;
};

// KNN graph with Gaussian edge weights exp(-d^2 / (2 sigma^2)). An edge (i,j)
// exists when j is among i's knn nearest points or vice versa (union
// symmetrization), so W is symmetric by construction and no vertex is
// isolated.
SimilarityGraph build_knn_graph(const RowMatrixXd& points, int knn,
                                double sigma);

// L = D^-1/2 (D - W) D^-1/2, mirrored across the diagonal so the result is
// symmetric to the last bit. Unit diagonal, spectrum within [0, 2].
Eigen::MatrixXd normalized_laplacian(const SimilarityGraph& graph);

// Dense symmetric eigendecomposition truncated to the k smallest eigenpairs.
// Rejects inputs that deviate from symmetry by more than 1e-10.
SpectralEmbedding smallest_eigenvectors(const Eigen::MatrixXd& laplacian,
                                        int k);

// Resolves the eigenvector sign ambiguity: each column is aligned with the
// majority direction of the residual data columns. For column k the residual
// is Y = L - sum_{i != k} lambda_i u_i u_i^T and the statistic is
// s_k = sum_j sign(u_k^T Y_j) (u_k^T Y_j)^2; the column is negated when
// s_k < 0 and kept as-is when s_k vanishes. Applying the operation twice
// equals applying it once.
Eigen::MatrixXd sign_flip(const Eigen::MatrixXd& laplacian,
                          const Eigen::MatrixXd& vectors,
                          const Eigen::VectorXd& eigenvalues);

// Scales every nonzero row to unit length; zero rows stay zero.
Eigen::MatrixXd normalize_rows(const Eigen::MatrixXd& matrix);

// Full pipeline: graph, Laplacian, truncated eigenvectors, sign flip, row
// normalization, then KKZ-seeded k-means on the embedding rows. Each cluster
// reports as its center the member point whose embedding row lies nearest the
// cluster's embedding mean, so centers are always real input points;
// final_cost measures input-space distances to those centers.
PartitionOutcome spectral_cluster(const RowMatrixXd& points,
                                  const SpectralConfig& config);

}  // namespace tokclust
