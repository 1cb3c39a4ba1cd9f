/*
 * Copyright 2026 The agreesim Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef AGREESIM_RNG_H_
#define AGREESIM_RNG_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

namespace agreesim {

// One step of the SplitMix64 finalizer.
uint64_t SplitMix64(uint64_t x);

// Seed for the stream with index `stream` under `master_seed`. Distinct
// indices give statistically independent streams.
uint64_t DeriveStreamSeed(uint64_t master_seed, uint64_t stream);

// Deterministic random stream. Uniform draws are computed from the raw
// engine output so that sequences do not depend on the standard library's
// distribution implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  // Child stream `index` of `master_seed`.
  static Rng ForStream(uint64_t master_seed, uint64_t index) {
    return Rng(DeriveStreamSeed(master_seed, index));
  }

  uint64_t NextU64() { return engine_(); }

  // Uniform in [0, 1) with 53 bits of resolution.
  double Uniform01();

  // Uniform integer in [0, n). `n` must be positive.
  std::size_t UniformIndex(std::size_t n);

  // Index drawn proportionally to `weights` (non-negative, positive sum).
  std::size_t Categorical(std::span<const double> weights);

  bool Bernoulli(double p) { return Uniform01() < p; }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace agreesim

#endif  // AGREESIM_RNG_H_
