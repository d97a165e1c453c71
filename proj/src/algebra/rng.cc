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

#include "mifefl/algebra/rng.h"

#include <sodium.h>

#include <algorithm>
#include <cstring>
#include <mutex>
#include <vector>

namespace mifefl {
namespace {

void EnsureSodium() {
  static std::once_flag once;
  std::call_once(once, [] {
    if (sodium_init() < 0) std::abort();
  });
}

}  // namespace

Rng::Rng(const Seed& seed) : seed_(seed) { EnsureSodium(); }

Rng Rng::FromU64(uint64_t seed) {
  EnsureSodium();
  uint8_t in[8];
  for (int i = 0; i < 8; ++i) in[i] = static_cast<uint8_t>(seed >> (56 - 8 * i));
  Seed out;
  crypto_generichash(out.data(), out.size(), in, sizeof(in),
                     reinterpret_cast<const uint8_t*>("mifefl.seed"), 11);
  return Rng(out);
}

Rng Rng::Derive(std::string_view domain, uint64_t index) const {
  crypto_generichash_state state;
  crypto_generichash_init(&state, seed_.data(), seed_.size(), kSeedSize);
  uint8_t len = static_cast<uint8_t>(std::min<size_t>(domain.size(), 255));
  crypto_generichash_update(&state, &len, 1);
  crypto_generichash_update(
      &state, reinterpret_cast<const uint8_t*>(domain.data()), len);
  uint8_t idx[8];
  for (int i = 0; i < 8; ++i) idx[i] = static_cast<uint8_t>(index >> (56 - 8 * i));
  crypto_generichash_update(&state, idx, sizeof(idx));
  Seed child;
  crypto_generichash_final(&state, child.data(), child.size());
  return Rng(child);
}

void Rng::Refill() {
  static constexpr uint8_t kNonce[crypto_stream_chacha20_NONCEBYTES] = {};
  std::fill(buffer_.begin(), buffer_.end(), 0);
  crypto_stream_chacha20_xor_ic(buffer_.data(), buffer_.data(), buffer_.size(),
                                kNonce, next_block_, seed_.data());
  next_block_ += kBufferSize / 64;
  pos_ = 0;
}

void Rng::Fill(std::span<uint8_t> out) {
  size_t done = 0;
  while (done < out.size()) {
    if (pos_ == kBufferSize) Refill();
    size_t take = std::min(out.size() - done, kBufferSize - pos_);
    std::memcpy(out.data() + done, buffer_.data() + pos_, take);
    pos_ += take;
    done += take;
  }
}

uint64_t Rng::NextU64() {
  uint8_t b[8];
  Fill(b);
  uint64_t v = 0;
  for (uint8_t byte : b) v = (v << 8) | byte;
  return v;
}

uint64_t Rng::UniformU64(uint64_t bound) {
  // Rejection from the largest multiple of bound below 2^64.
  const uint64_t limit = bound * (UINT64_MAX / bound);
  for (;;) {
    uint64_t v = NextU64();
    if (v < limit) return v % bound;
  }
}

mpz_class Rng::Uniform(const mpz_class& bound) {
  if (bound <= 1) return 0;
  mpz_class top = bound - 1;
  const size_t bits = mpz_sizeinbase(top.get_mpz_t(), 2);
  const size_t bytes = (bits + 7) / 8;
  const unsigned excess = static_cast<unsigned>(bytes * 8 - bits);
  std::vector<uint8_t> buf(bytes);
  mpz_class v;
  for (;;) {
    Fill(buf);
    buf[0] &= static_cast<uint8_t>(0xFFu >> excess);
    mpz_import(v.get_mpz_t(), bytes, 1, 1, 1, 0, buf.data());
    if (v < bound) return v;
  }
}

bool Rng::Bit() {
  uint8_t b;
  Fill({&b, 1});
  return (b & 1) != 0;
}

double Rng::UniformOpenUnit() {
  for (;;) {
    uint64_t v = NextU64() >> 11;  // 53 random bits
    if (v != 0) return static_cast<double>(v) * 0x1.0p-53;
  }
}

}  // namespace mifefl
