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

#include "tokclust/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tokclust/errors.hpp"

namespace tokclust {
namespace {

double dot(Eigen::Ref<const Eigen::VectorXd> x,
           Eigen::Ref<const Eigen::VectorXd> y) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    acc += x(i) * y(i);
  }
  return acc;
}

void check_batch(const RetrievalBatch& batch) {
  const Eigen::Index n = batch.texts.rows();
  if (n < 1) {
    throw ValidationError("retrieval batch is empty");
  }
  if (static_cast<Eigen::Index>(batch.videos.size()) != n) {
    throw ValidationError("batch video count does not match text count");
  }
  if (!(batch.tau > 0.0)) {
    throw ValidationError("temperature tau must be > 0");
  }
  for (const Eigen::MatrixXd& video : batch.videos) {
    if (video.rows() < 1) {
      throw ValidationError("video has an empty segment list");
    }
    if (video.cols() != batch.texts.cols()) {
      throw ValidationError("segment dimension does not match text dimension");
    }
  }
}

// Raw similarity matrix; norm tolerances are deliberately not enforced here
// so the finite-difference harness can probe perturbed batches.
Eigen::MatrixXd similarity_matrix(const RetrievalBatch& batch) {
  const Eigen::Index n = batch.texts.rows();
  Eigen::MatrixXd sim(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::MatrixXd& video = batch.videos[i];
    for (Eigen::Index j = 0; j < n; ++j) {
      double acc = 0.0;
      for (Eigen::Index q = 0; q < video.rows(); ++q) {
        acc += dot(video.row(q).transpose(), batch.texts.row(j).transpose());
      }
      sim(i, j) = acc / static_cast<double>(video.rows());
    }
  }
  return sim;
}

double log_sum_exp(const Eigen::VectorXd& logits) {
  const double peak = logits.maxCoeff();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < logits.size(); ++i) {
    acc += std::exp(logits(i) - peak);
  }
  return peak + std::log(acc);
}

double loss_from_similarity(const Eigen::MatrixXd& sim, double tau) {
  const Eigen::Index n = sim.rows();
  const Eigen::MatrixXd logits = sim / tau;
  double v2t = 0.0;
  double t2v = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    v2t += log_sum_exp(logits.row(i).transpose()) - logits(i, i);
    t2v += log_sum_exp(logits.col(i)) - logits(i, i);
  }
  const double count = static_cast<double>(n);
  return 0.5 * (v2t / count + t2v / count);
}

}  // namespace

double pair_similarity(Eigen::Ref<const Eigen::VectorXd> video,
                       Eigen::Ref<const Eigen::VectorXd> text) {
  if (video.size() != text.size()) {
    throw ValidationError("representation dimension mismatch");
  }
  for (const auto* vec : {&video, &text}) {
    const double norm = std::sqrt(dot(*vec, *vec));
    if (std::abs(norm - 1.0) > 1e-6) {
      std::ostringstream out;
      out << "representation norm " << norm << " deviates from 1 beyond 1e-6";
      throw ValidationError(out.str());
    }
  }
  return dot(video, text);
}

double segment_similarity(const Eigen::MatrixXd& video_segments,
                          Eigen::Ref<const Eigen::VectorXd> text) {
  if (video_segments.rows() < 1) {
    throw ValidationError("segment similarity requires at least one segment");
  }
  if (video_segments.cols() != text.size()) {
    throw ValidationError("representation dimension mismatch");
  }
  double acc = 0.0;
  for (Eigen::Index q = 0; q < video_segments.rows(); ++q) {
    acc += dot(video_segments.row(q).transpose(), text);
  }
  return acc / static_cast<double>(video_segments.rows());
}

LossResult contrastive_loss(const RetrievalBatch& batch) {
  check_batch(batch);
  LossResult result;
  result.similarity = similarity_matrix(batch);
  result.loss = loss_from_similarity(result.similarity, batch.tau);
  return result;
}

BatchGradient loss_gradient(const RetrievalBatch& batch) {
  check_batch(batch);
  const Eigen::Index n = batch.texts.rows();
  const Eigen::MatrixXd sim = similarity_matrix(batch);
  const Eigen::MatrixXd logits = sim / batch.tau;

  // dL/dz_ab = (P_ab + Q_ab - 2 I_ab) / (2N) with P row-softmax, Q col-softmax.
  Eigen::MatrixXd dz(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double row_lse = log_sum_exp(logits.row(i).transpose());
    for (Eigen::Index j = 0; j < n; ++j) {
      dz(i, j) = std::exp(logits(i, j) - row_lse);
    }
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    const double col_lse = log_sum_exp(logits.col(j));
    for (Eigen::Index i = 0; i < n; ++i) {
      dz(i, j) += std::exp(logits(i, j) - col_lse);
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    dz(i, i) -= 2.0;
  }
  dz /= 2.0 * static_cast<double>(n);

  BatchGradient grad;
  grad.videos.reserve(n);
  grad.texts = Eigen::MatrixXd::Zero(n, batch.texts.cols());
  double dtau = 0.0;
  for (Eigen::Index a = 0; a < n; ++a) {
    const Eigen::MatrixXd& video = batch.videos[a];
    const double segments = static_cast<double>(video.rows());
    Eigen::MatrixXd gvideo = Eigen::MatrixXd::Zero(video.rows(), video.cols());
    Eigen::VectorXd video_mean = video.colwise().mean().transpose();
    for (Eigen::Index b = 0; b < n; ++b) {
      const double w = dz(a, b) / batch.tau;
      for (Eigen::Index q = 0; q < video.rows(); ++q) {
        gvideo.row(q) += (w / segments) * batch.texts.row(b);
      }
      grad.texts.row(b) += w * video_mean.transpose();
      dtau -= dz(a, b) * sim(a, b) / (batch.tau * batch.tau);
    }
    grad.videos.push_back(std::move(gvideo));
  }
  grad.tau = dtau;
  return grad;
}

double loss_gradient_check(const RetrievalBatch& batch, double epsilon) {
  if (!(epsilon >= 1e-6 && epsilon <= 1e-3)) {
    throw ValidationError("epsilon must lie in [1e-6, 1e-3]");
  }
  check_batch(batch);
  if (batch.tau <= epsilon) {
    throw ValidationError("tau too small for the requested epsilon");
  }
  const BatchGradient analytic = loss_gradient(batch);

  double max_rel = 0.0;
  const auto update = [&max_rel](double a, double fd) {
    const double denom = std::max({std::abs(a), std::abs(fd), 1e-4});
    max_rel = std::max(max_rel, std::abs(a - fd) / denom);
  };
  const auto loss_of = [](const RetrievalBatch& b) {
    return loss_from_similarity(similarity_matrix(b), b.tau);
  };

  RetrievalBatch probe = batch;
  for (std::size_t v = 0; v < probe.videos.size(); ++v) {
    for (Eigen::Index q = 0; q < probe.videos[v].rows(); ++q) {
      for (Eigen::Index c = 0; c < probe.videos[v].cols(); ++c) {
        const double saved = probe.videos[v](q, c);
        probe.videos[v](q, c) = saved + epsilon;
        const double up = loss_of(probe);
        probe.videos[v](q, c) = saved - epsilon;
        const double down = loss_of(probe);
        probe.videos[v](q, c) = saved;
        update(analytic.videos[v](q, c), (up - down) / (2.0 * epsilon));
      }
    }
  }
  for (Eigen::Index i = 0; i < probe.texts.rows(); ++i) {
    for (Eigen::Index c = 0; c < probe.texts.cols(); ++c) {
      const double saved = probe.texts(i, c);
      probe.texts(i, c) = saved + epsilon;
      const double up = loss_of(probe);
      probe.texts(i, c) = saved - epsilon;
      const double down = loss_of(probe);
      probe.texts(i, c) = saved;
      update(analytic.texts(i, c), (up - down) / (2.0 * epsilon));
    }
  }
  {
    const double saved = probe.tau;
    probe.tau = saved + epsilon;
    const double up = loss_of(probe);
    probe.tau = saved - epsilon;
    const double down = loss_of(probe);
    probe.tau = saved;
    update(analytic.tau, (up - down) / (2.0 * epsilon));
  }
  return max_rel;
}

}  // namespace tokclust
