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

#include "mifefl/ipfe/lwe.h"

#include <cstdlib>
#include <utility>

#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "mifefl/algebra/group.h"
#include "mifefl/status_macros.h"

namespace mifefl::lwe {
namespace {

constexpr char kNoiseOverflow[] = "noise overflow";

void SampleNoise(const ZqRing& ring, const GaussianParams& noise, Limb* out,
                 Rng& rng) {
  if (FitsNarrowSampler(noise)) {
    ring.SetSigned(out, GaussianSample(noise, rng));
  } else {
    ring.Set(out, GaussianSampleWide(noise, rng));
  }
}

absl::Status CheckNorm(const mpz_class& v, const mpz_class& bound,
                       const char* what, size_t index) {
  if (abs(v) >= bound) {
    return absl::InvalidArgumentError(absl::StrCat(
        what, "[", index, "] = ", v.get_str(), " violates the infinity-norm bound ",
        bound.get_str()));
  }
  return absl::OkStatus();
}

mpz_class ScaleFactor(const LweParams& params) {
  return params.modulus / params.plaintext_modulus;
}

}  // namespace

absl::Status LweParams::Validate() const {
  if (secret_dim == 0 || sample_dim == 0 || vector_len == 0) {
    return absl::InvalidArgumentError("LWE dimensions must be positive");
  }
  if (plaintext_modulus < 2) {
    return absl::InvalidArgumentError("plaintext modulus must be >= 2");
  }
  if (modulus <= plaintext_modulus) {
    return absl::InvalidArgumentError("LWE modulus q must exceed the plaintext modulus");
  }
  MIFEFL_RETURN_IF_ERROR(noise.Validate());
  if (mode == SecurityMode::kAdaptive) {
    MIFEFL_RETURN_IF_ERROR(secret_noise.Validate());
    if (!FitsNarrowSampler(secret_noise)) {
      return absl::InvalidArgumentError("adaptive secret width too large");
    }
  }
  if (x_bound < 1 || y_bound < 1) {
    return absl::InvalidArgumentError("norm bounds must be positive");
  }
  if (x_bound > plaintext_modulus) {
    return absl::InvalidArgumentError("plaintext bound X exceeds the plaintext modulus");
  }
  // Bounded plaintexts must decrypt unambiguously; with X = p the caller
  // works with full residues and handles the bound itself.
  if (x_bound < plaintext_modulus &&
      x_bound * y_bound * static_cast<unsigned long>(vector_len) >=
          plaintext_modulus) {
    return absl::InvalidArgumentError("X * Y * m must be below the plaintext modulus");
  }
  return absl::OkStatus();
}

absl::StatusOr<mpz_class> Center(const mpz_class& v, const mpz_class& p,
                                 const mpz_class& q) {
  if (v < 0 || v >= p) {
    return absl::OutOfRangeError(
        absl::StrCat("center function input ", v.get_str(), " outside [0, ",
                     p.get_str(), ")"));
  }
  mpz_class out = v * q;
  mpz_fdiv_q(out.get_mpz_t(), out.get_mpz_t(), p.get_mpz_t());
  return out;
}

mpz_class EncodePlaintext(const LweParams& params, const mpz_class& v) {
  const mpz_class r = Mod(v, params.plaintext_modulus);
  if (params.mode == SecurityMode::kSelective) {
    return *Center(r, params.plaintext_modulus, params.modulus);
  }
  return r * ScaleFactor(params);
}

mpz_class CenteredLift(const mpz_class& residue, const mpz_class& modulus) {
  mpz_class r = Mod(residue, modulus);
  if (2 * r > modulus) r -= modulus;
  return r;
}

bool IsNoiseOverflow(const absl::Status& status) {
  return absl::IsResourceExhausted(status) &&
         absl::StrContains(status.message(), kNoiseOverflow);
}

absl::StatusOr<LweMasterKeys> LweSetup(const LweParams& params, Rng& rng) {
  MIFEFL_RETURN_IF_ERROR(params.Validate());
  auto shared_params = std::make_shared<const LweParams>(params);
  auto ring = std::make_shared<const ZqRing>(params.modulus);
  const size_t n = params.secret_dim, m_samples = params.sample_dim,
               len = params.vector_len, k = ring->limbs();

  auto a = std::make_shared<ZqMatrix>(m_samples, n, k);
  for (size_t i = 0; i < m_samples; ++i) {
    for (size_t j = 0; j < n; ++j) ring->SampleUniform(a->At(i, j), rng);
  }

  LweMasterKeys keys;
  keys.msk.mode = params.mode;
  if (params.mode == SecurityMode::kSelective) {
    ZqMatrix s(n, len, k);
    for (size_t i = 0; i < n; ++i) {
      for (size_t c = 0; c < len; ++c) ring->SampleUniform(s.At(i, c), rng);
    }
    auto u = std::make_shared<ZqMatrix>(m_samples, len, k);
    ZqAccumulator acc(*ring);
    std::vector<Limb> e(k);
    for (size_t i = 0; i < m_samples; ++i) {
      for (size_t c = 0; c < len; ++c) {
        acc.Clear();
        for (size_t j = 0; j < n; ++j) acc.AddProduct(a->At(i, j), s.At(j, c));
        SampleNoise(*ring, params.noise, e.data(), rng);
        acc.Add(e.data());
        acc.ReduceInto(u->At(i, c));
      }
    }
    keys.msk.s_uniform = std::move(s);
    keys.msk.rows = n;
    keys.msk.cols = len;
    keys.mpk.u = std::move(u);
  } else {
    std::vector<int64_t> s(len * m_samples);
    for (auto& v : s) v = GaussianSample(params.secret_noise, rng);
    auto u = std::make_shared<ZqMatrix>(len, n, k);
    std::vector<ZqAccumulator> acc(n, ZqAccumulator(*ring));
    for (size_t r = 0; r < len; ++r) {
      for (auto& x : acc) x.Clear();
      for (size_t i = 0; i < m_samples; ++i) {
        const int64_t coeff = s[r * m_samples + i];
        if (coeff == 0) continue;
        for (size_t j = 0; j < n; ++j) acc[j].AddScaled(a->At(i, j), coeff);
      }
      for (size_t j = 0; j < n; ++j) acc[j].ReduceInto(u->At(r, j));
    }
    keys.msk.s_small = std::move(s);
    keys.msk.rows = len;
    keys.msk.cols = m_samples;
    keys.mpk.u = std::move(u);
  }
  keys.mpk.params = std::move(shared_params);
  keys.mpk.ring = std::move(ring);
  keys.mpk.a = std::move(a);
  return keys;
}

absl::StatusOr<LweCiphertext> LweEncrypt(const LwePublicKey& mpk,
                                         const std::vector<mpz_class>& x,
                                         Rng& rng) {
  const LweParams& params = *mpk.params;
  const ZqRing& ring = *mpk.ring;
  if (x.size() != params.vector_len) {
    return absl::InvalidArgumentError(absl::StrCat(
        "plaintext has length ", x.size(), ", expected ", params.vector_len));
  }
  for (size_t i = 0; i < x.size(); ++i) {
    MIFEFL_RETURN_IF_ERROR(CheckNorm(x[i], params.x_bound, "x", i));
  }
  const size_t n = params.secret_dim, m_samples = params.sample_dim,
               len = params.vector_len, k = ring.limbs();
  const ZqMatrix& a = *mpk.a;
  const ZqMatrix& u = *mpk.u;
  LweCiphertext ct;
  ct.mode = params.mode;
  std::vector<Limb> tmp(k);

  if (params.mode == SecurityMode::kSelective) {
    std::vector<uint8_t> r(m_samples);
    rng.Fill(r);
    std::vector<ZqAccumulator> acc0(n, ZqAccumulator(ring));
    std::vector<ZqAccumulator> acc1(len, ZqAccumulator(ring));
    for (size_t i = 0; i < m_samples; ++i) {
      if ((r[i] & 1) == 0) continue;
      for (size_t j = 0; j < n; ++j) acc0[j].Add(a.At(i, j));
      for (size_t c = 0; c < len; ++c) acc1[c].Add(u.At(i, c));
    }
    ct.ct0 = ZqMatrix::Vector(n, k);
    ct.ct1 = ZqMatrix::Vector(len, k);
    for (size_t j = 0; j < n; ++j) acc0[j].ReduceInto(ct.ct0.At(j));
    for (size_t c = 0; c < len; ++c) {
      ring.Set(tmp.data(), EncodePlaintext(params, x[c]));
      acc1[c].Add(tmp.data());
      acc1[c].ReduceInto(ct.ct1.At(c));
    }
    return ct;
  }

  ZqMatrix s = ZqMatrix::Vector(n, k);
  for (size_t j = 0; j < n; ++j) ring.SampleUniform(s.At(j), rng);
  ct.ct0 = ZqMatrix::Vector(m_samples, k);
  ct.ct1 = ZqMatrix::Vector(len, k);
  ZqAccumulator acc(ring);
  for (size_t i = 0; i < m_samples; ++i) {
    acc.Clear();
    for (size_t j = 0; j < n; ++j) acc.AddProduct(a.At(i, j), s.At(j));
    SampleNoise(ring, params.noise, tmp.data(), rng);
    acc.Add(tmp.data());
    acc.ReduceInto(ct.ct0.At(i));
  }
  for (size_t c = 0; c < len; ++c) {
    acc.Clear();
    for (size_t j = 0; j < n; ++j) acc.AddProduct(u.At(c, j), s.At(j));
    SampleNoise(ring, params.noise, tmp.data(), rng);
    acc.Add(tmp.data());
    ring.Set(tmp.data(), EncodePlaintext(params, x[c]));
    acc.Add(tmp.data());
    acc.ReduceInto(ct.ct1.At(c));
  }
  return ct;
}

absl::StatusOr<LweFunctionalKey> LweKeygen(const LweMasterKeys& keys,
                                           const std::vector<int64_t>& y) {
  const LweParams& params = *keys.mpk.params;
  const ZqRing& ring = *keys.mpk.ring;
  if (y.size() != params.vector_len) {
    return absl::InvalidArgumentError(absl::StrCat(
        "key vector has length ", y.size(), ", expected ", params.vector_len));
  }
  for (size_t i = 0; i < y.size(); ++i) {
    MIFEFL_RETURN_IF_ERROR(
        CheckNorm(mpz_class(static_cast<long>(y[i])), params.y_bound, "y", i));
  }
  LweFunctionalKey sk;
  sk.mode = params.mode;
  sk.y = y;
  const LweSecretKey& msk = keys.msk;
  if (params.mode == SecurityMode::kSelective) {
    sk.d_residues = ZqMatrix::Vector(params.secret_dim, ring.limbs());
    ZqAccumulator acc(ring);
    for (size_t j = 0; j < params.secret_dim; ++j) {
      acc.Clear();
      for (size_t c = 0; c < y.size(); ++c) {
        acc.AddScaled(msk.s_uniform.At(j, c), y[c]);
      }
      acc.ReduceInto(sk.d_residues.At(j));
    }
    return sk;
  }
  sk.d_small.assign(params.sample_dim, 0);
  for (size_t j = 0; j < params.sample_dim; ++j) {
    __int128 sum = 0;
    for (size_t c = 0; c < y.size(); ++c) {
      sum += static_cast<__int128>(msk.s_small[c * params.sample_dim + j]) * y[c];
    }
    if (sum > INT64_MAX || sum < INT64_MIN) {
      return absl::OutOfRangeError("adaptive key entry overflows 64 bits");
    }
    sk.d_small[j] = static_cast<int64_t>(sum);
  }
  return sk;
}

absl::StatusOr<mpz_class> LweDecryptPartial(const LwePublicKey& mpk,
                                            const LweCiphertext& ct,
                                            const LweFunctionalKey& sk) {
  const LweParams& params = *mpk.params;
  const ZqRing& ring = *mpk.ring;
  if (ct.mode != sk.mode || ct.mode != params.mode) {
    return absl::InvalidArgumentError(
        absl::StrCat("ciphertext is ", SecurityModeName(ct.mode),
                     " but key is ", SecurityModeName(sk.mode)));
  }
  const size_t head = params.mode == SecurityMode::kSelective
                          ? params.secret_dim
                          : params.sample_dim;
  if (ct.ct0.size() != head || ct.ct1.size() != params.vector_len ||
      sk.y.size() != params.vector_len) {
    return absl::InvalidArgumentError("LWE ciphertext/key dimension mismatch");
  }
  ZqAccumulator acc(ring);
  for (size_t c = 0; c < sk.y.size(); ++c) acc.AddScaled(ct.ct1.At(c), sk.y[c]);
  std::vector<Limb> out(ring.limbs());
  if (params.mode == SecurityMode::kSelective) {
    if (sk.d_residues.size() != head) {
      return absl::InvalidArgumentError("LWE key d has wrong length");
    }
    ZqAccumulator masked(ring);
    for (size_t j = 0; j < head; ++j) {
      masked.AddProduct(sk.d_residues.At(j), ct.ct0.At(j));
    }
    std::vector<Limb> lhs(ring.limbs()), rhs(ring.limbs());
    acc.ReduceInto(lhs.data());
    masked.ReduceInto(rhs.data());
    ring.Sub(out.data(), lhs.data(), rhs.data());
  } else {
    if (sk.d_small.size() != head) {
      return absl::InvalidArgumentError("LWE key d has wrong length");
    }
    for (size_t j = 0; j < head; ++j) {
      if (sk.d_small[j] == INT64_MIN) {
        return absl::OutOfRangeError("adaptive key entry out of range");
      }
      acc.AddScaled(ct.ct0.At(j), -sk.d_small[j]);
    }
    acc.ReduceInto(out.data());
  }
  return ring.Get(out.data());
}

absl::StatusOr<mpz_class> LweRecover(const LweParams& params,
                                     const mpz_class& c,
                                     const mpz_class& result_bound) {
  const mpz_class& q = params.modulus;
  const mpz_class& p = params.plaintext_modulus;
  const mpz_class residue = Mod(c, q);
  mpz_class res;
  if (params.mode == SecurityMode::kSelective) {
    // round(C p / q) = floor((2 C p + q) / 2q).
    res = 2 * residue * p + q;
    mpz_fdiv_q(res.get_mpz_t(), res.get_mpz_t(), mpz_class(2 * q).get_mpz_t());
  } else {
    const mpz_class scale = ScaleFactor(params);
    res = 2 * residue + scale;
    mpz_fdiv_q(res.get_mpz_t(), res.get_mpz_t(), mpz_class(2 * scale).get_mpz_t());
  }
  res = Mod(res, p);
  const mpz_class residual = CenteredLift(residue - EncodePlaintext(params, res), q);
  // A quarter of the spacing between encodings.
  const mpz_class budget = q / (4 * p);
  if (abs(residual) > budget) {
    return absl::ResourceExhaustedError(absl::StrCat(
        kNoiseOverflow, ": residual ", residual.get_str(), " exceeds ",
        budget.get_str()));
  }
  if (abs(CenteredLift(res, p)) > result_bound) {
    return absl::ResourceExhaustedError(absl::StrCat(
        kNoiseOverflow, ": decrypted value ", CenteredLift(res, p).get_str(),
        " outside the result bound ", result_bound.get_str()));
  }
  return res;
}

absl::StatusOr<mpz_class> LweDecrypt(const LwePublicKey& mpk,
                                     const LweCiphertext& ct,
                                     const LweFunctionalKey& sk,
                                     const mpz_class& result_bound) {
  MIFEFL_ASSIGN_OR_RETURN(mpz_class c, LweDecryptPartial(mpk, ct, sk));
  return LweRecover(*mpk.params, c, result_bound);
}

std::vector<uint8_t> SerializeCiphertext(const ZqRing& ring,
                                         const LweCiphertext& ct) {
  std::vector<uint8_t> out;
  WriteResidues(ring, ct.ct0, out);
  WriteResidues(ring, ct.ct1, out);
  return out;
}

absl::StatusOr<LweCiphertext> ParseCiphertext(const LweParams& params,
                                              const ZqRing& ring,
                                              const uint8_t* data,
                                              size_t size) {
  const size_t head = params.mode == SecurityMode::kSelective
                          ? params.secret_dim
                          : params.sample_dim;
  const size_t width = ring.bytes();
  if (size != (head + params.vector_len) * width) {
    return absl::InvalidArgumentError("LWE ciphertext has wrong length");
  }
  LweCiphertext ct;
  ct.mode = params.mode;
  ct.ct0 = ZqMatrix::Vector(head, ring.limbs());
  ct.ct1 = ZqMatrix::Vector(params.vector_len, ring.limbs());
  if (!ReadResidues(ring, data, head * width, ct.ct0) ||
      !ReadResidues(ring, data + head * width, params.vector_len * width,
                    ct.ct1)) {
    return absl::InvalidArgumentError("LWE ciphertext entry not reduced mod q");
  }
  return ct;
}

std::vector<uint8_t> SerializePublicKey(const LwePublicKey& mpk) {
  std::vector<uint8_t> out;
  WriteResidues(*mpk.ring, *mpk.a, out);
  WriteResidues(*mpk.ring, *mpk.u, out);
  return out;
}

std::vector<uint8_t> SerializeFunctionalKey(const ZqRing& ring,
                                            const LweFunctionalKey& sk) {
  std::vector<uint8_t> out;
  if (sk.mode == SecurityMode::kSelective) {
    WriteResidues(ring, sk.d_residues, out);
  } else {
    ZqMatrix d = ZqMatrix::Vector(sk.d_small.size(), ring.limbs());
    for (size_t j = 0; j < sk.d_small.size(); ++j) ring.SetSigned(d.At(j), sk.d_small[j]);
    WriteResidues(ring, d, out);
  }
  bool binary = true;
  for (int64_t v : sk.y) binary = binary && (v == 0 || v == 1);
  out.push_back(binary ? 0 : 1);
  if (binary) {
    std::vector<uint8_t> bits((sk.y.size() + 7) / 8, 0);
    for (size_t i = 0; i < sk.y.size(); ++i) {
      if (sk.y[i] == 1) bits[i / 8] |= static_cast<uint8_t>(1u << (i % 8));
    }
    out.insert(out.end(), bits.begin(), bits.end());
  } else {
    ZqMatrix yv = ZqMatrix::Vector(sk.y.size(), ring.limbs());
    for (size_t i = 0; i < sk.y.size(); ++i) ring.SetSigned(yv.At(i), sk.y[i]);
    WriteResidues(ring, yv, out);
  }
  return out;
}

}  // namespace mifefl::lwe
