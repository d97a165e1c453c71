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

#ifndef MIFEFL_IPFE_ZQ_H_
#define MIFEFL_IPFE_ZQ_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include <gmp.h>
#include <gmpxx.h>

#include "mifefl/algebra/rng.h"

namespace mifefl {

using Limb = mp_limb_t;

// Arithmetic modulo q on fixed-width little-endian limb arrays. Every stored
// residue occupies limbs() words and is canonical in [0, q).
class ZqRing {
 public:
  explicit ZqRing(const mpz_class& modulus);

  const mpz_class& modulus() const { return modulus_; }
  size_t limbs() const { return limbs_; }
  size_t bits() const { return bits_; }
  // Serialization width of one residue in whole bytes.
  size_t bytes() const { return (bits_ + 7) / 8; }

  void Set(Limb* out, const mpz_class& v) const;
  void SetSigned(Limb* out, int64_t v) const;
  mpz_class Get(const Limb* in) const;

  // out = a + b and out = a - b (mod q). out may alias either operand.
  void Add(Limb* out, const Limb* a, const Limb* b) const;
  void Sub(Limb* out, const Limb* a, const Limb* b) const;

  void SampleUniform(Limb* out, Rng& rng) const;

  const Limb* modulus_limbs() const { return mod_.data(); }
  // 2^128 mod q, used by the single-limb accumulator.
  unsigned __int128 two_pow_128() const { return two_pow_128_; }

 private:
  mpz_class modulus_;
  size_t limbs_;
  size_t bits_;
  std::vector<Limb> mod_;
  unsigned __int128 two_pow_128_ = 0;
};

// Row-major matrix of residues. A vector is a matrix with one column.
class ZqMatrix {
 public:
  ZqMatrix() = default;
  ZqMatrix(size_t rows, size_t cols, size_t limbs)
      : rows_(rows), cols_(cols), limbs_(limbs), data_(rows * cols * limbs) {}

  static ZqMatrix Vector(size_t length, size_t limbs) {
    return ZqMatrix(length, 1, limbs);
  }

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  size_t limbs() const { return limbs_; }
  size_t size() const { return rows_ * cols_; }

  Limb* At(size_t r, size_t c) { return data_.data() + (r * cols_ + c) * limbs_; }
  const Limb* At(size_t r, size_t c) const {
    return data_.data() + (r * cols_ + c) * limbs_;
  }
  Limb* At(size_t i) { return At(i, 0); }
  const Limb* At(size_t i) const { return At(i, 0); }

  const std::vector<Limb>& data() const { return data_; }

  friend bool operator==(const ZqMatrix&, const ZqMatrix&) = default;

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  size_t limbs_ = 0;
  std::vector<Limb> data_;
};

// Sum of products with a single reduction at the end. Holds 2k+2 limbs, so
// up to 2^128 full-width products can be added before the final reduction.
class ZqAccumulator {
 public:
  explicit ZqAccumulator(const ZqRing& ring);

  void Clear();
  void Add(const Limb* a);
  void AddProduct(const Limb* a, const Limb* b);
  // a * s for a small signed integer s.
  void AddScaled(const Limb* a, int64_t s);

  // Writes the accumulated value reduced mod q.
  void ReduceInto(Limb* out) const;

 private:
  const ZqRing* ring_;
  size_t k_;
  // Single-limb moduli: 128-bit sum plus an overflow counter.
  unsigned __int128 pos_lo_ = 0;
  unsigned __int128 neg_lo_ = 0;
  uint64_t pos_carry_ = 0;
  uint64_t neg_carry_ = 0;
  // Multi-limb moduli.
  std::vector<Limb> pos_;
  std::vector<Limb> neg_;
  mutable std::vector<Limb> scratch_;
};

// Little-endian fixed-width encoding, ring.bytes() per entry.
void WriteResidues(const ZqRing& ring, const ZqMatrix& values,
                   std::vector<uint8_t>& out);
// Reads rows * cols residues; fails on truncated input or values >= q.
bool ReadResidues(const ZqRing& ring, const uint8_t* data, size_t size,
                  ZqMatrix& out);

}  // namespace mifefl

#endif  // MIFEFL_IPFE_ZQ_H_
