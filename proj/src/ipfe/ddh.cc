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

#include "mifefl/ipfe/ddh.h"

#include <map>
#include <mutex>
#include <string>
#include <utility>

#include "absl/strings/str_cat.h"
#include "mifefl/status_macros.h"

namespace mifefl::ddh {
namespace {

absl::Status CheckDimension(size_t expected, size_t actual,
                            const char* what) {
  if (expected != actual) {
    return absl::InvalidArgumentError(absl::StrCat(
        what, " has length ", actual, ", expected ", expected));
  }
  return absl::OkStatus();
}

// Packs y as a bitmap when every entry is 0 or 1, else as fixed-width
// signed magnitudes. One leading byte selects the layout.
void WriteKeyVector(const GroupParams& group, const std::vector<mpz_class>& y,
                    std::vector<uint8_t>& out) {
  bool binary = true;
  for (const auto& v : y) binary = binary && (v == 0 || v == 1);
  out.push_back(binary ? 0 : 1);
  if (binary) {
    std::vector<uint8_t> bits((y.size() + 7) / 8, 0);
    for (size_t i = 0; i < y.size(); ++i) {
      if (y[i] == 1) bits[i / 8] |= static_cast<uint8_t>(1u << (i % 8));
    }
    out.insert(out.end(), bits.begin(), bits.end());
    return;
  }
  for (const auto& v : y) WriteElement(group, Mod(v, group.order_q), out);
}

}  // namespace

absl::StatusOr<DdhMasterKeys> DdhSetup(SecurityMode mode,
                                       const GroupParams& group,
                                       size_t dimension, Rng& rng) {
  if (dimension == 0) {
    return absl::InvalidArgumentError("DDH setup requires m >= 1");
  }
  DdhMasterKeys keys;
  keys.mpk.mode = keys.msk.mode = mode;
  keys.mpk.group = group;
  keys.mpk.dimension = dimension;
  if (mode == SecurityMode::kSelective) {
    keys.msk.s.reserve(dimension);
    keys.mpk.h.reserve(dimension);
    for (size_t i = 0; i < dimension; ++i) {
      keys.msk.s.push_back(rng.Uniform(group.order_q));
      keys.mpk.h.push_back(GroupExp(group, keys.msk.s.back()));
    }
    return keys;
  }
  const mpz_class a = rng.Uniform(group.order_q);
  keys.mpk.g_a = {group.generator_g, GroupExp(group, a)};
  keys.msk.w.reserve(dimension);
  keys.mpk.g_wa.reserve(dimension);
  for (size_t i = 0; i < dimension; ++i) {
    std::array<mpz_class, 2> row = {rng.Uniform(group.order_q),
                                    rng.Uniform(group.order_q)};
    keys.mpk.g_wa.push_back(GroupExp(group, row[0] + row[1] * a));
    keys.msk.w.push_back(std::move(row));
  }
  return keys;
}

absl::StatusOr<DdhMasterKeys> DdhSetupFromSecret(const GroupParams& group,
                                                 std::vector<mpz_class> s) {
  if (s.empty()) {
    return absl::InvalidArgumentError("DDH setup requires m >= 1");
  }
  DdhMasterKeys keys;
  keys.mpk.mode = keys.msk.mode = SecurityMode::kSelective;
  keys.mpk.group = group;
  keys.mpk.dimension = s.size();
  for (auto& v : s) {
    v = Mod(v, group.order_q);
    keys.mpk.h.push_back(GroupExp(group, v));
  }
  keys.msk.s = std::move(s);
  return keys;
}

absl::StatusOr<DdhCiphertext> DdhEncryptWithRandomness(
    const DdhPublicKey& mpk, const std::vector<mpz_class>& x,
    const mpz_class& r) {
  MIFEFL_RETURN_IF_ERROR(CheckDimension(mpk.dimension, x.size(), "plaintext"));
  const GroupParams& group = mpk.group;
  DdhCiphertext ct;
  ct.mode = mpk.mode;
  ct.body.reserve(x.size());
  if (mpk.mode == SecurityMode::kSelective) {
    ct.head.push_back(GroupExp(group, r));
    for (size_t i = 0; i < x.size(); ++i) {
      ct.body.push_back(
          GroupMul(group, GroupPow(group, mpk.h[i], r), GroupExp(group, x[i])));
    }
    return ct;
  }
  ct.head.push_back(GroupPow(group, mpk.g_a[0], r));
  ct.head.push_back(GroupPow(group, mpk.g_a[1], r));
  for (size_t i = 0; i < x.size(); ++i) {
    ct.body.push_back(GroupMul(group, GroupPow(group, mpk.g_wa[i], r),
                               GroupExp(group, x[i])));
  }
  return ct;
}

absl::StatusOr<DdhCiphertext> DdhEncrypt(const DdhPublicKey& mpk,
                                         const std::vector<mpz_class>& x,
                                         Rng& rng) {
  MIFEFL_RETURN_IF_ERROR(CheckDimension(mpk.dimension, x.size(), "plaintext"));
  const mpz_class r = rng.Uniform(mpk.group.order_q);
  return DdhEncryptWithRandomness(mpk, x, r);
}

absl::StatusOr<DdhFunctionalKey> DdhKeygen(const DdhSecretKey& msk,
                                           const GroupParams& group,
                                           const std::vector<mpz_class>& y) {
  const size_t m =
      msk.mode == SecurityMode::kSelective ? msk.s.size() : msk.w.size();
  MIFEFL_RETURN_IF_ERROR(CheckDimension(m, y.size(), "key vector"));
  DdhFunctionalKey sk;
  sk.mode = msk.mode;
  sk.y = y;
  if (msk.mode == SecurityMode::kSelective) {
    mpz_class d = 0;
    for (size_t i = 0; i < m; ++i) d += y[i] * msk.s[i];
    sk.d.push_back(Mod(d, group.order_q));
    return sk;
  }
  mpz_class d0 = 0, d1 = 0;
  for (size_t i = 0; i < m; ++i) {
    d0 += msk.w[i][0] * y[i];
    d1 += msk.w[i][1] * y[i];
  }
  sk.d = {Mod(d0, group.order_q), Mod(d1, group.order_q)};
  return sk;
}

absl::StatusOr<mpz_class> DdhDecryptPartial(const GroupParams& group,
                                            const DdhCiphertext& ct,
                                            const DdhFunctionalKey& sk) {
  if (ct.mode != sk.mode) {
    return absl::InvalidArgumentError(
        absl::StrCat("ciphertext is ", SecurityModeName(ct.mode),
                     " but key is ", SecurityModeName(sk.mode)));
  }
  MIFEFL_RETURN_IF_ERROR(CheckDimension(sk.y.size(), ct.body.size(),
                                        "ciphertext body"));
  const size_t head = ct.mode == SecurityMode::kSelective ? 1 : 2;
  MIFEFL_RETURN_IF_ERROR(CheckDimension(head, ct.head.size(), "ciphertext head"));
  MIFEFL_RETURN_IF_ERROR(CheckDimension(head, sk.d.size(), "key d"));
  mpz_class c = 1;
  for (size_t i = 0; i < ct.body.size(); ++i) {
    if (sk.y[i] == 0) continue;
    c = GroupMul(group, c, GroupPow(group, ct.body[i], sk.y[i]));
  }
  for (size_t i = 0; i < head; ++i) {
    c = GroupMul(group, c, GroupPow(group, ct.head[i], -sk.d[i]));
  }
  return c;
}

absl::StatusOr<int64_t> DdhDecrypt(const GroupParams& group,
                                   const DdhCiphertext& ct,
                                   const DdhFunctionalKey& sk,
                                   const DlogWindow& window) {
  MIFEFL_ASSIGN_OR_RETURN(mpz_class c, DdhDecryptPartial(group, ct, sk));
  return BoundedDlog(group, c, window);
}

std::shared_ptr<const FixedBaseTable> GeneratorTable(const GroupParams& group) {
  static std::mutex mu;
  static std::map<std::string, std::shared_ptr<const FixedBaseTable>> cache;
  const std::string key =
      group.modulus_p.get_str(16) + ":" + group.generator_g.get_str(16);
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[key];
  if (!slot) {
    slot = std::make_shared<const FixedBaseTable>(group, group.generator_g);
  }
  return slot;
}

DdhEncryptor::DdhEncryptor(const DdhPublicKey& mpk)
    : mpk_(&mpk), g_(GeneratorTable(mpk.group)) {
  if (mpk.mode == SecurityMode::kSelective) {
    bases_.reserve(mpk.h.size());
    for (const auto& h : mpk.h) bases_.emplace_back(mpk.group, h);
  } else {
    bases_.reserve(mpk.g_wa.size() + 1);
    bases_.emplace_back(mpk.group, mpk.g_a[1]);
    for (const auto& b : mpk.g_wa) bases_.emplace_back(mpk.group, b);
  }
}

absl::StatusOr<DdhCiphertext> DdhEncryptor::Encrypt(
    const std::vector<mpz_class>& x, Rng& rng) const {
  MIFEFL_RETURN_IF_ERROR(
      CheckDimension(mpk_->dimension, x.size(), "plaintext"));
  const GroupParams& group = mpk_->group;
  const mpz_class r = rng.Uniform(group.order_q);
  DdhCiphertext ct;
  ct.mode = mpk_->mode;
  ct.body.reserve(x.size());
  ct.head.push_back(g_->Pow(r));
  size_t first = 0;
  if (mpk_->mode == SecurityMode::kAdaptive) {
    ct.head.push_back(bases_[0].Pow(r));
    first = 1;
  }
  for (size_t i = 0; i < x.size(); ++i) {
    ct.body.push_back(
        GroupMul(group, bases_[first + i].Pow(r), g_->Pow(x[i])));
  }
  return ct;
}

std::vector<uint8_t> SerializeCiphertext(const GroupParams& group,
                                         const DdhCiphertext& ct) {
  std::vector<uint8_t> out;
  out.reserve((ct.head.size() + ct.body.size()) * group.ElementBytes());
  for (const auto& e : ct.head) WriteElement(group, e, out);
  for (const auto& e : ct.body) WriteElement(group, e, out);
  return out;
}

absl::StatusOr<DdhCiphertext> ParseCiphertext(const GroupParams& group,
                                              SecurityMode mode,
                                              size_t dimension,
                                              const uint8_t* data,
                                              size_t size) {
  const size_t width = group.ElementBytes();
  const size_t head = mode == SecurityMode::kSelective ? 1 : 2;
  if (size != (head + dimension) * width) {
    return absl::InvalidArgumentError("DDH ciphertext has wrong length");
  }
  DdhCiphertext ct;
  ct.mode = mode;
  for (size_t i = 0; i < head + dimension; ++i) {
    MIFEFL_ASSIGN_OR_RETURN(mpz_class e,
                            ReadElement(group, data + i * width, width));
    (i < head ? ct.head : ct.body).push_back(std::move(e));
  }
  return ct;
}

std::vector<uint8_t> SerializePublicKey(const DdhPublicKey& mpk) {
  std::vector<uint8_t> out;
  if (mpk.mode == SecurityMode::kSelective) {
    for (const auto& e : mpk.h) WriteElement(mpk.group, e, out);
  } else {
    // g_a[0] is always g and is not written.
    WriteElement(mpk.group, mpk.g_a[1], out);
    for (const auto& e : mpk.g_wa) WriteElement(mpk.group, e, out);
  }
  return out;
}

std::vector<uint8_t> SerializeFunctionalKey(const GroupParams& group,
                                            const DdhFunctionalKey& sk) {
  std::vector<uint8_t> out;
  for (const auto& d : sk.d) WriteElement(group, d, out);
  WriteKeyVector(group, sk.y, out);
  return out;
}

}  // namespace mifefl::ddh
