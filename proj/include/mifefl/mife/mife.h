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

#ifndef MIFEFL_MIFE_MIFE_H_
#define MIFEFL_MIFE_MIFE_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <string_view>
#include <variant>
#include <vector>

#include <gmpxx.h>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "mifefl/algebra/dlog.h"
#include "mifefl/algebra/group.h"
#include "mifefl/algebra/rng.h"
#include "mifefl/ipfe/ddh.h"
#include "mifefl/ipfe/lwe.h"
#include "mifefl/ipfe/mode.h"

namespace mifefl::mife {

// Values double as the 1-byte tag of serialized bundles.
enum class Scheme : uint8_t {
  kDdhSelective = 1,
  kDdhAdaptive = 2,
  kLweSelective = 3,
  kLweAdaptive = 4,
};

inline constexpr Scheme kAllSchemes[] = {
    Scheme::kDdhSelective, Scheme::kDdhAdaptive, Scheme::kLweSelective,
    Scheme::kLweAdaptive};

// "ddh-selective", "ddh-adaptive", "lwe-selective", "lwe-adaptive".
const char* SchemeName(Scheme scheme);
absl::StatusOr<Scheme> ParseScheme(std::string_view name);
bool IsDdh(Scheme scheme);
SecurityMode ModeOf(Scheme scheme);

struct MifeConfig {
  size_t n = 2;  // clients
  size_t m = 1;  // entries per client vector
  Scheme scheme = Scheme::kDdhSelective;
  GroupParams group;   // DDH schemes
  lwe::LweParams lwe;  // LWE schemes; vector_len and the bounds are derived
  // Inclusive bounds on |x_ij| and |y_ij|.
  mpz_class plaintext_bound = 1;
  mpz_class key_bound = 1;
  // Test mode: every pad is zero.
  bool zero_pads = false;

  // q for DDH, p or K for LWE.
  mpz_class PadModulus() const;
  // Largest possible |sum_i <x_i, y_i>| for the current n.
  mpz_class ResultBound() const;
  // Requires n >= 2 and 2 * n * m * plaintext_bound * key_bound below the
  // pad modulus, so signed results are recoverable.
  absl::Status Validate() const;
  // Parameters of the single-input scheme behind every slot.
  lwe::LweParams InnerLweParams() const;
};

using InnerPublicKey = std::variant<ddh::DdhPublicKey, lwe::LwePublicKey>;
using InnerSecretKey = std::variant<ddh::DdhSecretKey, lwe::LweMasterKeys>;
using InnerCiphertext = std::variant<ddh::DdhCiphertext, lwe::LweCiphertext>;
using InnerFunctionalKey =
    std::variant<ddh::DdhFunctionalKey, lwe::LweFunctionalKey>;

// csk_i = (mpk'_i, u_i). Slots are numbered from 1.
struct MifeClientKey {
  Scheme scheme = Scheme::kDdhSelective;
  size_t slot = 0;
  std::shared_ptr<const MifeConfig> config;
  std::shared_ptr<const InnerPublicKey> mpk;
  std::vector<mpz_class> pad;
  // Fixed-base tables over mpk (DDH only).
  std::shared_ptr<const ddh::DdhEncryptor> encryptor;
};

struct MifeSlot {
  std::shared_ptr<const InnerPublicKey> mpk;
  std::shared_ptr<const InnerSecretKey> msk;
  std::vector<mpz_class> pad;
  std::shared_ptr<const ddh::DdhEncryptor> encryptor;
};

// msk = ((msk'_i)_i, (u_i)_i), held by the authority only.
struct MifeMasterKey {
  std::shared_ptr<const MifeConfig> config;
  std::map<size_t, MifeSlot> slots;
  size_t next_slot = 1;

  std::vector<size_t> ActiveSlots() const;
};

struct MifeSetupResult {
  MifeMasterKey msk;
  std::vector<MifeClientKey> client_keys;
};

struct MifeCiphertext {
  Scheme scheme = Scheme::kDdhSelective;
  size_t slot = 0;
  InnerCiphertext inner;
};

// sk_y = ((sk_{i,y})_i, z). Also carries the public parameters the
// decryptor needs (group or LWE ring), never the LWE matrices.
struct MifeFunctionalKey {
  Scheme scheme = Scheme::kDdhSelective;
  std::shared_ptr<const MifeConfig> config;
  std::vector<size_t> slots;
  std::vector<InnerFunctionalKey> inner;
  mpz_class z;
  std::vector<int64_t> y;
  // LWE: params and ring only.
  lwe::LwePublicKey lwe_public;
};

absl::StatusOr<MifeSetupResult> MifeSetup(const MifeConfig& config, Rng& rng);

absl::StatusOr<MifeCiphertext> MifeEncrypt(const MifeClientKey& csk,
                                           const std::vector<mpz_class>& x,
                                           Rng& rng);

// y is the concatenation of the y_i over the active slots in increasing
// slot order, n * m entries.
absl::StatusOr<MifeFunctionalKey> MifeKeygen(const MifeMasterKey& msk,
                                             const std::vector<int64_t>& y);

// Dec_1 for one slot: g^{<x_i + u_i, y_i>} (DDH) or the unrounded residue
// (LWE).
absl::StatusOr<mpz_class> MifeDecryptPartial(const MifeFunctionalKey& sk,
                                             const MifeCiphertext& ct);

// Folds the partials (product or sum) and removes the pad aggregate z.
// Partials are indexed like sk.slots.
absl::StatusOr<mpz_class> MifeCombine(const MifeFunctionalKey& sk,
                                      const std::vector<mpz_class>& partials);

// Dec_2 recovery: bounded dlog over `window` (DDH) or rounding, with the
// result lifted into `window` (LWE). `table` is an optional prebuilt
// baby-step table for DDH.
absl::StatusOr<int64_t> MifeRecover(const MifeFunctionalKey& sk,
                                    const mpz_class& combined,
                                    const DlogWindow& window,
                                    const BabyStepTable* table = nullptr);

// Full decryption. `cts` holds one ciphertext per key slot, in any order.
absl::StatusOr<int64_t> MifeDecrypt(const MifeFunctionalKey& sk,
                                    const std::vector<MifeCiphertext>& cts,
                                    const DlogWindow& window,
                                    const BabyStepTable* table = nullptr);

// Window [-ResultBound, ResultBound].
DlogWindow SymmetricWindow(const MifeConfig& config);

// The client key of an existing slot (after a pad change, for example).
absl::StatusOr<MifeClientKey> ClientKeyFor(const MifeMasterKey& msk,
                                           size_t slot);

// Membership changes on the authority side.
// Adds a slot with a fresh inner setup and pad; returns its id.
absl::StatusOr<size_t> MifeAddSlot(MifeMasterKey& msk, Rng& rng);
absl::Status MifeRemoveSlot(MifeMasterKey& msk, size_t slot);
// Draws a fresh pad for `slot`.
absl::Status MifeRerandomizePad(MifeMasterKey& msk, size_t slot, Rng& rng);

inline constexpr size_t kBundleHeaderBytes = 5;

// 1-byte scheme tag, 4-byte big-endian slot, inner bytes.
std::vector<uint8_t> SerializeCiphertext(const MifeConfig& config,
                                         const MifeCiphertext& ct);
absl::StatusOr<MifeCiphertext> ParseCiphertext(const MifeConfig& config,
                                               const uint8_t* data,
                                               size_t size);
// Header, inner mpk, then the pad entries. Scalars outside the inner
// scheme are written at the width of one ciphertext entry.
std::vector<uint8_t> SerializeClientKey(const MifeClientKey& csk);
// Header (slot field holds the slot count), the inner d of every slot, z,
// then a 1-byte flag and y: a bitmap when binary, else one entry each.
std::vector<uint8_t> SerializeFunctionalKey(const MifeFunctionalKey& sk);

}  // namespace mifefl::mife

#endif  // MIFEFL_MIFE_MIFE_H_
