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

#include <Eigen/Core>

namespace tokclust {

// Paired video/text representations for scoring. videos[i] holds the S
// segment vectors of video i (one per row); texts row i is the matched text.
// Representations are expected unit-norm; tau scales the softmax logits.
struct RetrievalBatch {
  std::vector<Eigen::MatrixXd> videos;
  Eigen::MatrixXd texts;
  double tau = 1.0;
};

struct LossResult {
  double loss = 0.0;
  Eigen::MatrixXd similarity;
};

// Gradients of the contrastive loss with respect to every representation
// component and tau.
struct BatchGradient {
  std::vector<Eigen::MatrixXd> videos;
  Eigen::MatrixXd texts;
  double tau = 0.0;
};

// Dot product of two unit vectors. Rejects inputs whose norm strays from 1 by
// more than 1e-6.
double pair_similarity(Eigen::Ref<const Eigen::VectorXd> video,
                       Eigen::Ref<const Eigen::VectorXd> text);

// Mean over segments of segment-vector . text. With one segment this equals
// pair_similarity.
double segment_similarity(const Eigen::MatrixXd& video_segments,
                          Eigen::Ref<const Eigen::VectorXd> text);

// Symmetric temperature-scaled contrastive loss over the matched batch: the
// average of the video-to-text and text-to-video softmax classification
// losses. Softmax uses max subtraction so small tau stays stable.
LossResult contrastive_loss(const RetrievalBatch& batch);

BatchGradient loss_gradient(const RetrievalBatch& batch);

// Compares the analytic gradient against central finite differences for every
// representation component and tau, returning the max relative error.
// epsilon must lie in [1e-6, 1e-3].
double loss_gradient_check(const RetrievalBatch& batch, double epsilon = 1e-5);

}  // namespace tokclust
