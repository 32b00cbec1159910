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

#include "tokclust/distance.hpp"

#include <cmath>
#include <sstream>

#include "tokclust/errors.hpp"

namespace tokclust {
namespace {

double squared_norm(Eigen::Ref<const Eigen::VectorXd> x) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    acc += x(i) * x(i);
  }
  return acc;
}

double raw_squared_distance(Eigen::Ref<const Eigen::VectorXd> x,
                            Eigen::Ref<const Eigen::VectorXd> y) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double diff = x(i) - y(i);
    acc += diff * diff;
  }
  return acc;
}

Eigen::VectorXd unit_or_zero(Eigen::Ref<const Eigen::VectorXd> x) {
  const double norm = std::sqrt(squared_norm(x));
  if (norm == 0.0) {
    return Eigen::VectorXd::Zero(x.size());
  }
  return x / norm;
}

}  // namespace

double squared_distance(Eigen::Ref<const Eigen::VectorXd> x,
                        Eigen::Ref<const Eigen::VectorXd> y,
                        const Metric& metric) {
  if (x.size() != y.size()) {
    std::ostringstream out;
    out << "dimension mismatch: " << x.size() << " vs " << y.size();
    throw ValidationError(out.str());
  }
  if (metric.pre_normalize) {
    return raw_squared_distance(unit_or_zero(x), unit_or_zero(y));
  }
  return raw_squared_distance(x, y);
}

double gaussian_similarity(Eigen::Ref<const Eigen::VectorXd> x,
                           Eigen::Ref<const Eigen::VectorXd> y, double sigma) {
  if (!(sigma > 0.0)) {
    throw ValidationError("gaussian similarity requires sigma > 0");
  }
  const double d2 = squared_distance(x, y);
  return std::exp(-d2 / (2.0 * sigma * sigma));
}

RowMatrixXd metric_points(const RowMatrixXd& points, const Metric& metric) {
  if (!metric.pre_normalize) {
    return points;
  }
  RowMatrixXd out(points.rows(), points.cols());
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    out.row(i) = unit_or_zero(points.row(i).transpose());
  }
  return out;
}

}  // namespace tokclust
