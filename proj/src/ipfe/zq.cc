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

#include "mifefl/ipfe/zq.h"

#include <algorithm>
#include <cstring>

namespace mifefl {
namespace {

unsigned __int128 Reduce128(unsigned __int128 v, uint64_t q) { return v % q; }

}  // namespace

ZqRing::ZqRing(const mpz_class& modulus) : modulus_(modulus) {
  bits_ = mpz_sizeinbase(modulus_.get_mpz_t(), 2);
  limbs_ = mpz_size(modulus_.get_mpz_t());
  mod_.assign(modulus_.get_mpz_t()->_mp_d, modulus_.get_mpz_t()->_mp_d + limbs_);
  if (limbs_ == 1) {
    const uint64_t q = mod_[0];
    unsigned __int128 two64 = (static_cast<unsigned __int128>(1) << 64) % q;
    two_pow_128_ = (two64 * two64) % q;
  }
}

void ZqRing::Set(Limb* out, const mpz_class& v) const {
  mpz_class r;
  mpz_mod(r.get_mpz_t(), v.get_mpz_t(), modulus_.get_mpz_t());
  std::fill(out, out + limbs_, 0);
  const size_t used = mpz_size(r.get_mpz_t());
  std::copy(r.get_mpz_t()->_mp_d, r.get_mpz_t()->_mp_d + used, out);
}

void ZqRing::SetSigned(Limb* out, int64_t v) const {
  if (limbs_ == 1) {
    const uint64_t q = mod_[0];
    if (v >= 0) {
      out[0] = static_cast<uint64_t>(v) % q;
    } else {
      const uint64_t mag = static_cast<uint64_t>(-(v + 1)) + 1;
      const uint64_t r = mag % q;
      out[0] = r == 0 ? 0 : q - r;
    }
    return;
  }
  Set(out, mpz_class(static_cast<long>(v)));
}

mpz_class ZqRing::Get(const Limb* in) const {
  mpz_class v;
  mpz_import(v.get_mpz_t(), limbs_, -1, sizeof(Limb), 0, 0, in);
  return v;
}

void ZqRing::Add(Limb* out, const Limb* a, const Limb* b) const {
  if (limbs_ == 1) {
    const unsigned __int128 s = static_cast<unsigned __int128>(a[0]) + b[0];
    out[0] = static_cast<Limb>(s >= mod_[0] ? s - mod_[0] : s);
    return;
  }
  const Limb carry = mpn_add_n(out, a, b, limbs_);
  if (carry || mpn_cmp(out, mod_.data(), limbs_) >= 0) {
    mpn_sub_n(out, out, mod_.data(), limbs_);
  }
}

void ZqRing::Sub(Limb* out, const Limb* a, const Limb* b) const {
  if (limbs_ == 1) {
    out[0] = a[0] >= b[0] ? a[0] - b[0] : a[0] + (mod_[0] - b[0]);
    return;
  }
  const Limb borrow = mpn_sub_n(out, a, b, limbs_);
  if (borrow) mpn_add_n(out, out, mod_.data(), limbs_);
}

void ZqRing::SampleUniform(Limb* out, Rng& rng) const {
  if (limbs_ == 1) {
    out[0] = rng.UniformU64(mod_[0]);
    return;
  }
  Set(out, rng.Uniform(modulus_));
}

ZqAccumulator::ZqAccumulator(const ZqRing& ring)
    : ring_(&ring), k_(ring.limbs()) {
  if (k_ > 1) {
    pos_.assign(2 * k_ + 2, 0);
    neg_.assign(2 * k_ + 2, 0);
    scratch_.assign(2 * k_ + 2, 0);
  }
}

void ZqAccumulator::Clear() {
  pos_lo_ = neg_lo_ = 0;
  pos_carry_ = neg_carry_ = 0;
  std::fill(pos_.begin(), pos_.end(), 0);
  std::fill(neg_.begin(), neg_.end(), 0);
}

void ZqAccumulator::Add(const Limb* a) {
  if (k_ == 1) {
    pos_lo_ += a[0];
    if (pos_lo_ < a[0]) ++pos_carry_;
    return;
  }
  mpn_add(pos_.data(), pos_.data(), pos_.size(), a, k_);
}

void ZqAccumulator::AddProduct(const Limb* a, const Limb* b) {
  if (k_ == 1) {
    const unsigned __int128 p = static_cast<unsigned __int128>(a[0]) * b[0];
    pos_lo_ += p;
    if (pos_lo_ < p) ++pos_carry_;
    return;
  }
  mpn_mul_n(scratch_.data(), a, b, k_);
  mpn_add(pos_.data(), pos_.data(), pos_.size(), scratch_.data(), 2 * k_);
}

void ZqAccumulator::AddScaled(const Limb* a, int64_t s) {
  if (s == 0) return;
  const uint64_t mag = s > 0 ? static_cast<uint64_t>(s)
                             : static_cast<uint64_t>(-(s + 1)) + 1;
  if (k_ == 1) {
    const unsigned __int128 p = static_cast<unsigned __int128>(a[0]) * mag;
    unsigned __int128& lo = s > 0 ? pos_lo_ : neg_lo_;
    uint64_t& carry = s > 0 ? pos_carry_ : neg_carry_;
    lo += p;
    if (lo < p) ++carry;
    return;
  }
  std::vector<Limb>& acc = s > 0 ? pos_ : neg_;
  const Limb carry = mpn_addmul_1(acc.data(), a, k_, mag);
  mpn_add_1(acc.data() + k_, acc.data() + k_, acc.size() - k_, carry);
}

void ZqAccumulator::ReduceInto(Limb* out) const {
  if (k_ == 1) {
    const uint64_t q = ring_->modulus_limbs()[0];
    auto fold = [&](unsigned __int128 lo, uint64_t carry) {
      unsigned __int128 hi =
          Reduce128(static_cast<unsigned __int128>(carry % q) *
                        static_cast<uint64_t>(ring_->two_pow_128()),
                    q);
      return static_cast<uint64_t>((hi + Reduce128(lo, q)) % q);
    };
    const uint64_t p = fold(pos_lo_, pos_carry_);
    const uint64_t n = fold(neg_lo_, neg_carry_);
    out[0] = p >= n ? p - n : p + (q - n);
    return;
  }
  const size_t len = pos_.size();
  std::vector<Limb> quotient(len - k_ + 1);
  std::vector<Limb> rp(k_), rn(k_);
  mpn_tdiv_qr(quotient.data(), rp.data(), 0, pos_.data(), len,
              ring_->modulus_limbs(), k_);
  mpn_tdiv_qr(quotient.data(), rn.data(), 0, neg_.data(), len,
              ring_->modulus_limbs(), k_);
  ring_->Sub(out, rp.data(), rn.data());
}

void WriteResidues(const ZqRing& ring, const ZqMatrix& values,
                   std::vector<uint8_t>& out) {
  const size_t width = ring.bytes();
  const size_t k = ring.limbs();
  out.reserve(out.size() + values.size() * width);
  for (size_t i = 0; i < values.size(); ++i) {
    const Limb* v = values.data().data() + i * k;
    for (size_t b = 0; b < width; ++b) {
      out.push_back(static_cast<uint8_t>(v[b / 8] >> (8 * (b % 8))));
    }
  }
}

bool ReadResidues(const ZqRing& ring, const uint8_t* data, size_t size,
                  ZqMatrix& out) {
  const size_t width = ring.bytes();
  const size_t k = ring.limbs();
  if (size != out.size() * width || out.limbs() != k) return false;
  for (size_t i = 0; i < out.size(); ++i) {
    Limb* v = out.At(i / out.cols(), i % out.cols());
    std::fill(v, v + k, 0);
    for (size_t b = 0; b < width; ++b) {
      v[b / 8] |= static_cast<Limb>(data[i * width + b]) << (8 * (b % 8));
    }
    if (mpn_cmp(v, ring.modulus_limbs(), k) >= 0) return false;
  }
  return true;
}

}  // namespace mifefl
