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

#include "mifefl/harness/presets.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"

namespace mifefl::harness {
namespace {

mpz_class Pow2(unsigned bits) {
  mpz_class v;
  mpz_ui_pow_ui(v.get_mpz_t(), 2, bits);
  return v;
}

mpz_class PrevPrime(const mpz_class& bound) {
  mpz_class c = bound - 1;
  while (mpz_probab_prime_p(c.get_mpz_t(), 40) == 0) --c;
  return c;
}

// Gaussian width from a noise rate: max(alpha * q, 3).
double WidthFromAlpha(double alpha, const mpz_class& q) {
  return std::max(alpha * mpz_get_d(q.get_mpz_t()), 3.0);
}

}  // namespace

absl::StatusOr<PresetSource> ParsePresetSource(std::string_view name) {
  if (name == "toy") return PresetSource::kToy;
  if (name == "table1") return PresetSource::kTable1;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown preset '", std::string(name), "' (toy|table1)"));
}

const char* PresetSourceName(PresetSource source) {
  return source == PresetSource::kToy ? "toy" : "table1";
}

absl::StatusOr<GroupParams> DdhGroupPreset(PresetSource source) {
  return GroupGen(source == PresetSource::kToy ? "toy-512" : "nist-3072");
}

lwe::LweParams LwePreset(SecurityMode mode, PresetSource source) {
  lwe::LweParams params;
  params.mode = mode;
  params.vector_len = 1;
  params.secret_noise = GaussianParams{3.0, 6.0};
  if (source == PresetSource::kToy) {
    params.secret_dim = 16;
    params.sample_dim = 128;
    params.modulus = Pow2(63);
    params.plaintext_modulus = Pow2(48);
    params.noise = GaussianParams{3.0, 6.0};
  } else if (mode == SecurityMode::kSelective) {
    params.secret_dim = 80;
    params.sample_dim = 5327;
    params.modulus = PrevPrime(Pow2(63));
    params.plaintext_modulus = PrevPrime(Pow2(48));
    params.noise = GaussianParams{
        WidthFromAlpha(kTable1AlphaSelective, params.modulus), 6.0};
  } else {
    params.secret_dim = 38;
    params.sample_dim = 9462;
    params.modulus = PrevPrime(Pow2(248));
    params.plaintext_modulus = PrevPrime(Pow2(48));
    params.noise = GaussianParams{
        WidthFromAlpha(kTable1AlphaAdaptive, params.modulus), 6.0};
  }
  params.x_bound = params.plaintext_modulus;
  params.y_bound = 2;
  return params;
}

lwe::LweParams ZeroNoise(lwe::LweParams params) {
  params.noise.std_dev = 1e-4;
  return params;
}

}  // namespace mifefl::harness
