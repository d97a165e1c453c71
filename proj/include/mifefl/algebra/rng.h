/*
 * Copyright 2026 The MIFE-FL Authors.
 *
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

#ifndef MIFEFL_ALGEBRA_RNG_H_
#define MIFEFL_ALGEBRA_RNG_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

#include <gmpxx.h>

namespace mifefl {

// Deterministic, seedable randomness source. The stream is the ChaCha20
// keystream under a 32-byte seed; identical seeds give identical streams.
//
// Every scheme operation takes an Rng explicitly. Child streams obtained via
// Derive() depend only on the parent seed, the domain tag and the index, so
// work split across threads stays reproducible regardless of scheduling.
class Rng {
 public:
  static constexpr size_t kSeedSize = 32;
  using Seed = std::array<uint8_t, kSeedSize>;

  explicit Rng(const Seed& seed);

  // Expands a 64-bit value into a full seed.
  static Rng FromU64(uint64_t seed);

  // Independent child stream for (domain, index). Does not advance *this.
  Rng Derive(std::string_view domain, uint64_t index) const;

  void Fill(std::span<uint8_t> out);
  uint64_t NextU64();

  // Uniform in [0, bound). bound must be positive.
  uint64_t UniformU64(uint64_t bound);
  mpz_class Uniform(const mpz_class& bound);

  bool Bit();

  // Uniform double in the open interval (0, 1).
  double UniformOpenUnit();

  const Seed& seed() const { return seed_; }

 private:
  void Refill();

  static constexpr size_t kBufferSize = 1024;

  Seed seed_;
  uint64_t next_block_ = 0;
  std::array<uint8_t, kBufferSize> buffer_{};
  size_t pos_ = kBufferSize;
};

}  // namespace mifefl

#endif  // MIFEFL_ALGEBRA_RNG_H_
