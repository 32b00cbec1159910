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

#include "tokclust/synth.hpp"

#include <cmath>
#include <numbers>

#include "tokclust/errors.hpp"

namespace tokclust {
namespace {

// Hand-rolled sampler: splitmix64 + Box-Muller. Standard library
// distributions are implementation-defined, which would break the
// byte-identical-output contract across toolchains.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : state_(seed) {}

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // In (0, 1): the offset keeps log() away from zero.
  double uniform01() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace

SynthResult make_planted_blobs(const SynthConfig& config) {
  if (config.blobs < 1 || config.dim < 1 || config.num_frames < 1 ||
      config.grid_rows < 1 || config.grid_cols < 1) {
    throw ValidationError("synth shape values must be positive");
  }
  if (config.blobs > config.dim) {
    throw ValidationError("blob count cannot exceed the dimension");
  }
  if (!(config.separation > 0.0) || config.jitter < 0.0) {
    throw ValidationError("synth needs separation > 0 and jitter >= 0");
  }

  const int tokens_per_frame = config.grid_rows * config.grid_cols;
  SynthResult result;
  TokenSet& tokens = result.tokens;
  tokens.dim = config.dim;
  tokens.num_frames = config.num_frames;
  tokens.tokens_per_frame = tokens_per_frame;
  tokens.grid_rows = config.grid_rows;
  tokens.grid_cols = config.grid_cols;
  tokens.data.resize(tokens.token_count() * config.dim);
  result.labels.resize(tokens.token_count());

  GaussianSource rng(config.seed);
  std::size_t cursor = 0;
  for (int frame = 0; frame < config.num_frames; ++frame) {
    for (int position = 0; position < tokens_per_frame; ++position) {
      const int blob = position % config.blobs;
      result.labels[static_cast<std::size_t>(frame) * tokens_per_frame +
                    position] = blob;
      for (int c = 0; c < config.dim; ++c) {
        double value = config.jitter * rng.normal();
        if (c == blob) {
          value += config.separation;
        }
        tokens.data[cursor++] = static_cast<float>(value);
      }
    }
  }
  tokens.validate();
  return result;
}

}  // namespace tokclust
