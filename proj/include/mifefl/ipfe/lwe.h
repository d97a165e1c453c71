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

#ifndef MIFEFL_IPFE_LWE_H_
#define MIFEFL_IPFE_LWE_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include <gmpxx.h>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "mifefl/algebra/gaussian.h"
#include "mifefl/algebra/rng.h"
#include "mifefl/ipfe/mode.h"
#include "mifefl/ipfe/zq.h"

namespace mifefl::lwe {

// Public parameters of the bounded-norm LWE inner-product schemes.
//
// Selective (Regev-style): plaintexts are encoded with the center function
// t(v) = floor(v q / p). Adaptive: plaintexts are scaled by floor(q / K).
// `plaintext_modulus` holds p or K respectively.
struct LweParams {
  SecurityMode mode = SecurityMode::kSelective;
  size_t secret_dim = 0;   // N
  size_t sample_dim = 0;   // M
  size_t vector_len = 1;   // m
  mpz_class modulus;       // q
  mpz_class plaintext_modulus;
  // Width of E (selective) or of e_0, e_1 (adaptive).
  GaussianParams noise;
  // Width of the entries of the adaptive secret S.
  GaussianParams secret_noise;
  // Exclusive infinity-norm bounds on plaintexts (X) and key vectors (Y).
  mpz_class x_bound;
  mpz_class y_bound;

  absl::Status Validate() const;
};

struct LwePublicKey {
  std::shared_ptr<const LweParams> params;
  std::shared_ptr<const ZqRing> ring;
  // A in Z_q^{M x N}.
  std::shared_ptr<const ZqMatrix> a;
  // selective: U = A S + E in Z_q^{M x m}. adaptive: U = S A in Z_q^{m x N}.
  std::shared_ptr<const ZqMatrix> u;
};

struct LweSecretKey {
  SecurityMode mode = SecurityMode::kSelective;
  // selective: S in Z_q^{N x m}.
  ZqMatrix s_uniform;
  // adaptive: S in Z^{m x M}, small Gaussian entries, row-major.
  std::vector<int64_t> s_small;
  size_t rows = 0;
  size_t cols = 0;
};

struct LweMasterKeys {
  LwePublicKey mpk;
  LweSecretKey msk;
};

// ct' (selective: A^T r, length N; adaptive: A s + e_0, length M) and
// ct'' (length m).
struct LweCiphertext {
  SecurityMode mode = SecurityMode::kSelective;
  ZqMatrix ct0;
  ZqMatrix ct1;

  friend bool operator==(const LweCiphertext&, const LweCiphertext&) = default;
};

// d = S y (selective, residues of length N) or S^T y (adaptive, small
// integers of length M).
struct LweFunctionalKey {
  SecurityMode mode = SecurityMode::kSelective;
  ZqMatrix d_residues;
  std::vector<int64_t> d_small;
  std::vector<int64_t> y;
};

absl::StatusOr<LweMasterKeys> LweSetup(const LweParams& params, Rng& rng);

// t(v) = floor(v q / p) for v in [0, p).
absl::StatusOr<mpz_class> Center(const mpz_class& v, const mpz_class& p,
                                 const mpz_class& q);

// Encoding of a plaintext residue v in [0, plaintext_modulus) into Z_q: t(v)
// for the selective scheme, v * floor(q / K) for the adaptive one.
mpz_class EncodePlaintext(const LweParams& params, const mpz_class& v);

// Plaintexts are signed integers with |x_i| < X, taken mod plaintext_modulus.
absl::StatusOr<LweCiphertext> LweEncrypt(const LwePublicKey& mpk,
                                         const std::vector<mpz_class>& x,
                                         Rng& rng);

absl::StatusOr<LweFunctionalKey> LweKeygen(const LweMasterKeys& keys,
                                           const std::vector<int64_t>& y);

// C = y . ct'' - d . ct' mod q, without rounding.
absl::StatusOr<mpz_class> LweDecryptPartial(const LwePublicKey& mpk,
                                            const LweCiphertext& ct,
                                            const LweFunctionalKey& sk);

// Rounds a (combined) residue C to the nearest plaintext encoding and returns
// it as a canonical residue mod plaintext_modulus. Returns
// ResourceExhausted ("noise overflow") when |C - encode(res)| exceeds a
// quarter of the gap between encodings, or when the signed value of the
// result exceeds result_bound.
absl::StatusOr<mpz_class> LweRecover(const LweParams& params,
                                     const mpz_class& c,
                                     const mpz_class& result_bound);

absl::StatusOr<mpz_class> LweDecrypt(const LwePublicKey& mpk,
                                     const LweCiphertext& ct,
                                     const LweFunctionalKey& sk,
                                     const mpz_class& result_bound);

// Maps a residue mod `modulus` to (-modulus/2, modulus/2].
mpz_class CenteredLift(const mpz_class& residue, const mpz_class& modulus);

// True when the status is the noise-overflow signal of LweRecover.
bool IsNoiseOverflow(const absl::Status& status);

std::vector<uint8_t> SerializeCiphertext(const ZqRing& ring,
                                         const LweCiphertext& ct);
absl::StatusOr<LweCiphertext> ParseCiphertext(const LweParams& params,
                                              const ZqRing& ring,
                                              const uint8_t* data,
                                              size_t size);
std::vector<uint8_t> SerializePublicKey(const LwePublicKey& mpk);
std::vector<uint8_t> SerializeFunctionalKey(const ZqRing& ring,
                                            const LweFunctionalKey& sk);

}  // namespace mifefl::lwe

#endif  // MIFEFL_IPFE_LWE_H_
