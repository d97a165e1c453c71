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

#include "mifefl/mife/mife.h"

#include <algorithm>
#include <utility>

#include "absl/strings/str_cat.h"
#include "mifefl/status_macros.h"

namespace mifefl::mife {
namespace {

absl::Status CheckInclusive(const mpz_class& v, const mpz_class& bound,
                            const char* what, size_t index) {
  if (abs(v) > bound) {
    return absl::InvalidArgumentError(
        absl::StrCat(what, "[", index, "] = ", v.get_str(),
                     " exceeds the bound ", bound.get_str()));
  }
  return absl::OkStatus();
}

size_t EntryBytes(const MifeConfig& config) {
  if (IsDdh(config.scheme)) return config.group.ElementBytes();
  return (mpz_sizeinbase(config.lwe.modulus.get_mpz_t(), 2) + 7) / 8;
}

// One scalar at ciphertext-entry width.
void WriteScalar(const MifeConfig& config, const mpz_class& v,
                 std::vector<uint8_t>& out) {
  if (IsDdh(config.scheme)) {
    WriteElement(config.group, Mod(v, config.group.order_q), out);
    return;
  }
  const size_t width = EntryBytes(config);
  mpz_class r = Mod(v, config.lwe.modulus);
  const size_t start = out.size();
  out.resize(start + width, 0);
  size_t written = 0;
  mpz_export(out.data() + start, &written, -1, 1, 0, 0, r.get_mpz_t());
}

void WriteHeader(Scheme scheme, size_t slot, std::vector<uint8_t>& out) {
  out.push_back(static_cast<uint8_t>(scheme));
  for (int shift = 24; shift >= 0; shift -= 8) {
    out.push_back(static_cast<uint8_t>((slot >> shift) & 0xff));
  }
}

mpz_class SamplePad(const MifeConfig& config, Rng& rng) {
  if (config.zero_pads) return 0;
  return rng.Uniform(config.PadModulus());
}

absl::StatusOr<MifeSlot> NewSlot(const MifeConfig& config, Rng& rng) {
  MifeSlot slot;
  if (IsDdh(config.scheme)) {
    MIFEFL_ASSIGN_OR_RETURN(
        ddh::DdhMasterKeys keys,
        ddh::DdhSetup(ModeOf(config.scheme), config.group, config.m, rng));
    auto mpk = std::make_shared<const InnerPublicKey>(std::move(keys.mpk));
    slot.encryptor = std::make_shared<const ddh::DdhEncryptor>(
        std::get<ddh::DdhPublicKey>(*mpk));
    slot.mpk = std::move(mpk);
    slot.msk = std::make_shared<const InnerSecretKey>(std::move(keys.msk));
  } else {
    MIFEFL_ASSIGN_OR_RETURN(lwe::LweMasterKeys keys,
                            lwe::LweSetup(config.InnerLweParams(), rng));
    slot.mpk = std::make_shared<const InnerPublicKey>(keys.mpk);
    slot.msk = std::make_shared<const InnerSecretKey>(std::move(keys));
  }
  slot.pad.reserve(config.m);
  for (size_t j = 0; j < config.m; ++j) slot.pad.push_back(SamplePad(config, rng));
  return slot;
}

MifeClientKey MakeClientKey(const MifeMasterKey& msk, size_t id,
                            const MifeSlot& slot) {
  MifeClientKey csk;
  csk.scheme = msk.config->scheme;
  csk.slot = id;
  csk.config = msk.config;
  csk.mpk = slot.mpk;
  csk.pad = slot.pad;
  csk.encryptor = slot.encryptor;
  return csk;
}

absl::StatusOr<size_t> IndexOfSlot(const MifeFunctionalKey& sk, size_t slot) {
  auto it = std::find(sk.slots.begin(), sk.slots.end(), slot);
  if (it == sk.slots.end()) {
    return absl::InvalidArgumentError(
        absl::StrCat("functional key has no slot ", slot));
  }
  return static_cast<size_t>(it - sk.slots.begin());
}

}  // namespace

const char* SchemeName(Scheme scheme) {
  switch (scheme) {
    case Scheme::kDdhSelective:
      return "ddh-selective";
    case Scheme::kDdhAdaptive:
      return "ddh-adaptive";
    case Scheme::kLweSelective:
      return "lwe-selective";
    case Scheme::kLweAdaptive:
      return "lwe-adaptive";
  }
  return "unknown";
}

absl::StatusOr<Scheme> ParseScheme(std::string_view name) {
  for (Scheme s : kAllSchemes) {
    if (name == SchemeName(s)) return s;
  }
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown scheme '", std::string(name),
      "' (ddh-selective|ddh-adaptive|lwe-selective|lwe-adaptive)"));
}

bool IsDdh(Scheme scheme) {
  return scheme == Scheme::kDdhSelective || scheme == Scheme::kDdhAdaptive;
}

SecurityMode ModeOf(Scheme scheme) {
  return scheme == Scheme::kDdhSelective || scheme == Scheme::kLweSelective
             ? SecurityMode::kSelective
             : SecurityMode::kAdaptive;
}

mpz_class MifeConfig::PadModulus() const {
  return IsDdh(scheme) ? group.order_q : lwe.plaintext_modulus;
}

mpz_class MifeConfig::ResultBound() const {
  return mpz_class(static_cast<unsigned long>(n * m)) * plaintext_bound *
         key_bound;
}

lwe::LweParams MifeConfig::InnerLweParams() const {
  lwe::LweParams inner = lwe;
  inner.mode = ModeOf(scheme);
  inner.vector_len = m;
  inner.x_bound = lwe.plaintext_modulus;
  inner.y_bound = key_bound + 1;
  return inner;
}

absl::Status MifeConfig::Validate() const {
  if (n < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("multi-input setup needs at least 2 clients, got ", n));
  }
  if (m == 0) return absl::InvalidArgumentError("vector length m must be >= 1");
  if (plaintext_bound < 0 || key_bound < 1) {
    return absl::InvalidArgumentError("invalid plaintext or key bound");
  }
  if (IsDdh(scheme)) {
    if (group.order_q < 2 || group.modulus_p <= group.order_q) {
      return absl::InvalidArgumentError("DDH scheme needs group parameters");
    }
  } else {
    MIFEFL_RETURN_IF_ERROR(InnerLweParams().Validate());
  }
  if (2 * ResultBound() >= PadModulus()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "result range 2 * ", ResultBound().get_str(),
        " does not fit below the pad modulus ", PadModulus().get_str()));
  }
  return absl::OkStatus();
}

std::vector<size_t> MifeMasterKey::ActiveSlots() const {
  std::vector<size_t> out;
  out.reserve(slots.size());
  for (const auto& [id, slot] : slots) out.push_back(id);
  return out;
}

absl::StatusOr<MifeSetupResult> MifeSetup(const MifeConfig& config, Rng& rng) {
  MIFEFL_RETURN_IF_ERROR(config.Validate());
  MifeSetupResult result;
  result.msk.config = std::make_shared<const MifeConfig>(config);
  for (size_t i = 0; i < config.n; ++i) {
    MIFEFL_ASSIGN_OR_RETURN(MifeSlot slot, NewSlot(config, rng));
    const size_t id = result.msk.next_slot++;
    result.client_keys.push_back(MakeClientKey(result.msk, id, slot));
    result.msk.slots.emplace(id, std::move(slot));
  }
  return result;
}

absl::StatusOr<MifeCiphertext> MifeEncrypt(const MifeClientKey& csk,
                                           const std::vector<mpz_class>& x,
                                           Rng& rng) {
  const MifeConfig& config = *csk.config;
  if (x.size() != config.m) {
    return absl::InvalidArgumentError(absl::StrCat(
        "plaintext has length ", x.size(), ", expected ", config.m));
  }
  const mpz_class pad_modulus = config.PadModulus();
  std::vector<mpz_class> shifted(x.size());
  for (size_t j = 0; j < x.size(); ++j) {
    MIFEFL_RETURN_IF_ERROR(CheckInclusive(x[j], config.plaintext_bound, "x", j));
    shifted[j] = Mod(x[j] + csk.pad[j], pad_modulus);
  }
  MifeCiphertext ct;
  ct.scheme = csk.scheme;
  ct.slot = csk.slot;
  if (IsDdh(csk.scheme)) {
    MIFEFL_ASSIGN_OR_RETURN(ct.inner, csk.encryptor->Encrypt(shifted, rng));
  } else {
    MIFEFL_ASSIGN_OR_RETURN(
        ct.inner,
        lwe::LweEncrypt(std::get<lwe::LwePublicKey>(*csk.mpk), shifted, rng));
  }
  return ct;
}

absl::StatusOr<MifeFunctionalKey> MifeKeygen(const MifeMasterKey& msk,
                                             const std::vector<int64_t>& y) {
  const MifeConfig& config = *msk.config;
  const size_t expected = msk.slots.size() * config.m;
  if (y.size() != expected) {
    return absl::InvalidArgumentError(absl::StrCat(
        "key vector has length ", y.size(), ", expected ", expected));
  }
  for (size_t j = 0; j < y.size(); ++j) {
    MIFEFL_RETURN_IF_ERROR(CheckInclusive(mpz_class(static_cast<long>(y[j])),
                                          config.key_bound, "y", j));
  }
  MifeFunctionalKey sk;
  sk.scheme = config.scheme;
  sk.config = msk.config;
  sk.y = y;
  mpz_class z = 0;
  size_t offset = 0;
  for (const auto& [id, slot] : msk.slots) {
    std::vector<int64_t> yi(y.begin() + offset, y.begin() + offset + config.m);
    for (size_t j = 0; j < config.m; ++j) {
      z += slot.pad[j] * mpz_class(static_cast<long>(yi[j]));
    }
    if (IsDdh(config.scheme)) {
      std::vector<mpz_class> ym;
      for (int64_t v : yi) ym.emplace_back(static_cast<long>(v));
      MIFEFL_ASSIGN_OR_RETURN(
          ddh::DdhFunctionalKey inner,
          ddh::DdhKeygen(std::get<ddh::DdhSecretKey>(*slot.msk), config.group, ym));
      sk.inner.emplace_back(std::move(inner));
    } else {
      const auto& keys = std::get<lwe::LweMasterKeys>(*slot.msk);
      MIFEFL_ASSIGN_OR_RETURN(lwe::LweFunctionalKey inner,
                              lwe::LweKeygen(keys, yi));
      sk.inner.emplace_back(std::move(inner));
      if (!sk.lwe_public.params) {
        sk.lwe_public.params = keys.mpk.params;
        sk.lwe_public.ring = keys.mpk.ring;
      }
    }
    sk.slots.push_back(id);
    offset += config.m;
  }
  sk.z = Mod(z, config.PadModulus());
  return sk;
}

absl::StatusOr<mpz_class> MifeDecryptPartial(const MifeFunctionalKey& sk,
                                             const MifeCiphertext& ct) {
  if (ct.scheme != sk.scheme) {
    return absl::InvalidArgumentError(
        absl::StrCat("ciphertext scheme ", SchemeName(ct.scheme),
                     " does not match key scheme ", SchemeName(sk.scheme)));
  }
  MIFEFL_ASSIGN_OR_RETURN(size_t index, IndexOfSlot(sk, ct.slot));
  if (IsDdh(sk.scheme)) {
    return ddh::DdhDecryptPartial(
        sk.config->group, std::get<ddh::DdhCiphertext>(ct.inner),
        std::get<ddh::DdhFunctionalKey>(sk.inner[index]));
  }
  return lwe::LweDecryptPartial(
      sk.lwe_public, std::get<lwe::LweCiphertext>(ct.inner),
      std::get<lwe::LweFunctionalKey>(sk.inner[index]));
}

absl::StatusOr<mpz_class> MifeCombine(const MifeFunctionalKey& sk,
                                      const std::vector<mpz_class>& partials) {
  if (partials.size() != sk.slots.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "expected ", sk.slots.size(), " partial decryptions, got ",
        partials.size()));
  }
  const MifeConfig& config = *sk.config;
  if (IsDdh(sk.scheme)) {
    mpz_class c = 1;
    for (const auto& p : partials) c = GroupMul(config.group, c, p);
    return GroupMul(config.group, c, GroupExp(config.group, -sk.z));
  }
  const lwe::LweParams& params = *sk.lwe_public.params;
  mpz_class c = 0;
  for (const auto& p : partials) c += p;
  c -= lwe::EncodePlaintext(params, sk.z);
  return Mod(c, params.modulus);
}

absl::StatusOr<int64_t> MifeRecover(const MifeFunctionalKey& sk,
                                    const mpz_class& combined,
                                    const DlogWindow& window,
                                    const BabyStepTable* table) {
  MIFEFL_RETURN_IF_ERROR(window.Validate());
  if (IsDdh(sk.scheme)) {
    if (table != nullptr) return table->Solve(combined, window);
    return BoundedDlog(sk.config->group, combined, window);
  }
  const lwe::LweParams& params = *sk.lwe_public.params;
  const mpz_class& p = params.plaintext_modulus;
  if (mpz_class(std::to_string(window.Size())) > p) {
    return absl::InvalidArgumentError("result window wider than the plaintext modulus");
  }
  MIFEFL_ASSIGN_OR_RETURN(mpz_class res, lwe::LweRecover(params, combined, p));
  const mpz_class lower(std::to_string(window.lower));
  const mpz_class value = lower + Mod(res - lower, p);
  if (value > mpz_class(std::to_string(window.upper))) {
    return absl::ResourceExhaustedError(absl::StrCat(
        "noise overflow: result residue ", res.get_str(),
        " has no representative in the window"));
  }
  return value.get_si();
}

absl::StatusOr<int64_t> MifeDecrypt(const MifeFunctionalKey& sk,
                                    const std::vector<MifeCiphertext>& cts,
                                    const DlogWindow& window,
                                    const BabyStepTable* table) {
  if (cts.size() != sk.slots.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "decryption needs ", sk.slots.size(), " ciphertexts, got ", cts.size()));
  }
  std::vector<mpz_class> partials(sk.slots.size());
  std::vector<bool> seen(sk.slots.size(), false);
  for (const auto& ct : cts) {
    MIFEFL_ASSIGN_OR_RETURN(size_t index, IndexOfSlot(sk, ct.slot));
    if (seen[index]) {
      return absl::InvalidArgumentError(
          absl::StrCat("two ciphertexts for slot ", ct.slot));
    }
    seen[index] = true;
    MIFEFL_ASSIGN_OR_RETURN(partials[index], MifeDecryptPartial(sk, ct));
  }
  MIFEFL_ASSIGN_OR_RETURN(mpz_class combined, MifeCombine(sk, partials));
  return MifeRecover(sk, combined, window, table);
}

DlogWindow SymmetricWindow(const MifeConfig& config) {
  const int64_t b = config.ResultBound().get_si();
  return DlogWindow{-b, b};
}

absl::StatusOr<MifeClientKey> ClientKeyFor(const MifeMasterKey& msk,
                                           size_t slot) {
  auto it = msk.slots.find(slot);
  if (it == msk.slots.end()) {
    return absl::NotFoundError(absl::StrCat("no slot ", slot));
  }
  return MakeClientKey(msk, slot, it->second);
}

absl::StatusOr<size_t> MifeAddSlot(MifeMasterKey& msk, Rng& rng) {
  MifeConfig config = *msk.config;
  config.n = msk.slots.size() + 1;
  MIFEFL_RETURN_IF_ERROR(config.Validate());
  MIFEFL_ASSIGN_OR_RETURN(MifeSlot slot, NewSlot(config, rng));
  const size_t id = msk.next_slot++;
  msk.slots.emplace(id, std::move(slot));
  msk.config = std::make_shared<const MifeConfig>(config);
  return id;
}

absl::Status MifeRemoveSlot(MifeMasterKey& msk, size_t slot) {
  if (!msk.slots.contains(slot)) {
    return absl::NotFoundError(absl::StrCat("no slot ", slot));
  }
  if (msk.slots.size() <= 2) {
    return absl::FailedPreconditionError(
        "dropout would leave fewer than 2 clients");
  }
  msk.slots.erase(slot);
  MifeConfig config = *msk.config;
  config.n = msk.slots.size();
  msk.config = std::make_shared<const MifeConfig>(config);
  return absl::OkStatus();
}

absl::Status MifeRerandomizePad(MifeMasterKey& msk, size_t slot, Rng& rng) {
  auto it = msk.slots.find(slot);
  if (it == msk.slots.end()) {
    return absl::NotFoundError(absl::StrCat("no slot ", slot));
  }
  for (auto& u : it->second.pad) u = SamplePad(*msk.config, rng);
  return absl::OkStatus();
}

std::vector<uint8_t> SerializeCiphertext(const MifeConfig& config,
                                         const MifeCiphertext& ct) {
  std::vector<uint8_t> out;
  WriteHeader(ct.scheme, ct.slot, out);
  std::vector<uint8_t> inner;
  if (IsDdh(ct.scheme)) {
    inner = ddh::SerializeCiphertext(config.group,
                                     std::get<ddh::DdhCiphertext>(ct.inner));
  } else {
    inner = lwe::SerializeCiphertext(ZqRing(config.lwe.modulus),
                                     std::get<lwe::LweCiphertext>(ct.inner));
  }
  out.insert(out.end(), inner.begin(), inner.end());
  return out;
}

absl::StatusOr<MifeCiphertext> ParseCiphertext(const MifeConfig& config,
                                               const uint8_t* data,
                                               size_t size) {
  if (size < kBundleHeaderBytes) {
    return absl::InvalidArgumentError("ciphertext bundle too short");
  }
  if (data[0] != static_cast<uint8_t>(config.scheme)) {
    return absl::InvalidArgumentError("ciphertext bundle has a foreign scheme tag");
  }
  MifeCiphertext ct;
  ct.scheme = config.scheme;
  for (size_t i = 1; i < kBundleHeaderBytes; ++i) ct.slot = (ct.slot << 8) | data[i];
  const uint8_t* body = data + kBundleHeaderBytes;
  const size_t body_size = size - kBundleHeaderBytes;
  if (IsDdh(config.scheme)) {
    MIFEFL_ASSIGN_OR_RETURN(
        ct.inner, ddh::ParseCiphertext(config.group, ModeOf(config.scheme),
                                       config.m, body, body_size));
  } else {
    MIFEFL_ASSIGN_OR_RETURN(
        ct.inner, lwe::ParseCiphertext(config.InnerLweParams(),
                                       ZqRing(config.lwe.modulus), body,
                                       body_size));
  }
  return ct;
}

std::vector<uint8_t> SerializeClientKey(const MifeClientKey& csk) {
  const MifeConfig& config = *csk.config;
  std::vector<uint8_t> out;
  WriteHeader(csk.scheme, csk.slot, out);
  std::vector<uint8_t> inner =
      IsDdh(csk.scheme)
          ? ddh::SerializePublicKey(std::get<ddh::DdhPublicKey>(*csk.mpk))
          : lwe::SerializePublicKey(std::get<lwe::LwePublicKey>(*csk.mpk));
  out.insert(out.end(), inner.begin(), inner.end());
  for (const auto& u : csk.pad) WriteScalar(config, u, out);
  return out;
}

std::vector<uint8_t> SerializeFunctionalKey(const MifeFunctionalKey& sk) {
  const MifeConfig& config = *sk.config;
  std::vector<uint8_t> out;
  WriteHeader(sk.scheme, sk.slots.size(), out);
  for (const auto& inner : sk.inner) {
    if (IsDdh(sk.scheme)) {
      for (const auto& d : std::get<ddh::DdhFunctionalKey>(inner).d) {
        WriteScalar(config, d, out);
      }
    } else {
      const auto& key = std::get<lwe::LweFunctionalKey>(inner);
      if (key.mode == SecurityMode::kSelective) {
        WriteResidues(*sk.lwe_public.ring, key.d_residues, out);
      } else {
        for (int64_t d : key.d_small) {
          WriteScalar(config, mpz_class(static_cast<long>(d)), out);
        }
      }
    }
  }
  WriteScalar(config, sk.z, out);
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
    for (int64_t v : sk.y) WriteScalar(config, mpz_class(static_cast<long>(v)), out);
  }
  return out;
}

}  // namespace mifefl::mife
