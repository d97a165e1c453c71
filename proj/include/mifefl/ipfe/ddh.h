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

#ifndef MIFEFL_IPFE_DDH_H_
#define MIFEFL_IPFE_DDH_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include <gmpxx.h>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "mifefl/algebra/dlog.h"
#include "mifefl/algebra/group.h"
#include "mifefl/algebra/rng.h"
#include "mifefl/ipfe/mode.h"

namespace mifefl::ddh {

// Master public key.
//   selective: h_i = g^{s_i}
//   adaptive:  (g^{a_1}, g^{a_2}) with a = (1, a)^T, and g^{(W a)_i}
struct DdhPublicKey {
  SecurityMode mode = SecurityMode::kSelective;
  GroupParams group;
  size_t dimension = 0;
  std::vector<mpz_class> h;
  std::array<mpz_class, 2> g_a;
  std::vector<mpz_class> g_wa;
};

// selective: s in Z_q^m. adaptive: W in Z_q^{m x 2}, row-major pairs.
struct DdhSecretKey {
  SecurityMode mode = SecurityMode::kSelective;
  std::vector<mpz_class> s;
  std::vector<std::array<mpz_class, 2>> w;
};

struct DdhMasterKeys {
  DdhPublicKey mpk;
  DdhSecretKey msk;
};

// selective: head = (ct_0), body = (ct_i). adaptive: head = ct' (2
// elements), body = ct'' (m elements).
struct DdhCiphertext {
  SecurityMode mode = SecurityMode::kSelective;
  std::vector<mpz_class> head;
  std::vector<mpz_class> body;

  friend bool operator==(const DdhCiphertext&, const DdhCiphertext&) = default;
};

// d = <y, s> mod q (selective, one entry) or W^T y mod q (adaptive, two).
struct DdhFunctionalKey {
  SecurityMode mode = SecurityMode::kSelective;
  std::vector<mpz_class> d;
  std::vector<mpz_class> y;
};

absl::StatusOr<DdhMasterKeys> DdhSetup(SecurityMode mode,
                                       const GroupParams& group,
                                       size_t dimension, Rng& rng);

// Selective keys for a caller-chosen secret s.
absl::StatusOr<DdhMasterKeys> DdhSetupFromSecret(const GroupParams& group,
                                                 std::vector<mpz_class> s);

absl::StatusOr<DdhCiphertext> DdhEncrypt(const DdhPublicKey& mpk,
                                         const std::vector<mpz_class>& x,
                                         Rng& rng);

// Encryption with explicit randomness r; DdhEncrypt draws r uniformly from
// Z_q and calls this.
absl::StatusOr<DdhCiphertext> DdhEncryptWithRandomness(
    const DdhPublicKey& mpk, const std::vector<mpz_class>& x,
    const mpz_class& r);

absl::StatusOr<DdhFunctionalKey> DdhKeygen(const DdhSecretKey& msk,
                                           const GroupParams& group,
                                           const std::vector<mpz_class>& y);

// First decryption step: C = g^{<x, y>}, no discrete log taken.
absl::StatusOr<mpz_class> DdhDecryptPartial(const GroupParams& group,
                                            const DdhCiphertext& ct,
                                            const DdhFunctionalKey& sk);

// Full decryption: bounded dlog of the partial result over `window`.
absl::StatusOr<int64_t> DdhDecrypt(const GroupParams& group,
                                   const DdhCiphertext& ct,
                                   const DdhFunctionalKey& sk,
                                   const DlogWindow& window);

// Encryptor with fixed-base tables for g and every public base. Produces
// the same ciphertexts as DdhEncrypt for the same randomness stream.
class DdhEncryptor {
 public:
  explicit DdhEncryptor(const DdhPublicKey& mpk);

  absl::StatusOr<DdhCiphertext> Encrypt(const std::vector<mpz_class>& x,
                                        Rng& rng) const;

 private:
  const DdhPublicKey* mpk_;
  std::shared_ptr<const FixedBaseTable> g_;
  // Selective: one table per h_i. Adaptive: table for g^{a_2}, then g^{wa_i}.
  std::vector<FixedBaseTable> bases_;
};

// Byte encodings; every group element uses the fixed width of the group.
std::vector<uint8_t> SerializeCiphertext(const GroupParams& group,
                                         const DdhCiphertext& ct);
absl::StatusOr<DdhCiphertext> ParseCiphertext(const GroupParams& group,
                                              SecurityMode mode,
                                              size_t dimension,
                                              const uint8_t* data, size_t size);
std::vector<uint8_t> SerializePublicKey(const DdhPublicKey& mpk);
std::vector<uint8_t> SerializeFunctionalKey(const GroupParams& group,
                                            const DdhFunctionalKey& sk);

// Shared fixed-base table for the generator of a group, built on first use.
std::shared_ptr<const FixedBaseTable> GeneratorTable(const GroupParams& group);

}  // namespace mifefl::ddh

#endif  // MIFEFL_IPFE_DDH_H_
