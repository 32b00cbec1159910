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

#include "tokclust/metrics.hpp"

#include <cstdint>
#include <map>
#include <utility>

#include "tokclust/errors.hpp"

namespace tokclust {
namespace {

double comb2(std::int64_t n) {
  return 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
}

}  // namespace

double adjusted_rand_index(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size() || a.empty()) {
    throw ValidationError("adjusted Rand index needs two equal-length labelings");
  }
  if (a.size() == 1) {
    return 1.0;
  }
  std::map<std::pair<int, int>, std::int64_t> cells;
  std::map<int, std::int64_t> rows;
  std::map<int, std::int64_t> cols;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++cells[{a[i], b[i]}];
    ++rows[a[i]];
    ++cols[b[i]];
  }
  double index = 0.0;
  for (const auto& [key, count] : cells) {
    index += comb2(count);
  }
  double row_sum = 0.0;
  for (const auto& [key, count] : rows) {
    row_sum += comb2(count);
  }
  double col_sum = 0.0;
  for (const auto& [key, count] : cols) {
    col_sum += comb2(count);
  }
  const double expected =
      row_sum * col_sum / comb2(static_cast<std::int64_t>(a.size()));
  const double max_index = 0.5 * (row_sum + col_sum);
  if (max_index == expected) {
    return 1.0;  // both partitions trivial; identical by convention
  }
  return (index - expected) / (max_index - expected);
}

}  // namespace tokclust
