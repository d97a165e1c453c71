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

#include <gtest/gtest.h>

#include "mifefl/algebra/group.h"
#include "mifefl/harness/presets.h"

namespace mifefl::lwe {
namespace {

using harness::LwePreset;
using harness::PresetSource;

mpz_class Pow2(unsigned bits) {
  mpz_class v;
  mpz_ui_pow_ui(v.get_mpz_t(), 2, bits);
  return v;
}

LweParams ZeroNoiseToy(SecurityMode mode) {
  LweParams p;
  p.mode = mode;
  p.secret_dim = 4;
  p.sample_dim = 20;
  p.vector_len = 1;
  p.modulus = Pow2(13);
  p.plaintext_modulus = 16;
  p.noise = GaussianParams{1e-4, 6.0};
  p.secret_noise = GaussianParams{3.0, 6.0};
  p.x_bound = 4;
  p.y_bound = 2;
  return p;
}

LweParams NoisyToy(SecurityMode mode) {
  LweParams p;
  p.mode = mode;
  p.secret_dim = 16;
  p.sample_dim = 200;
  p.vector_len = 4;
  p.modulus = Pow2(26);
  p.plaintext_modulus = 512;
  p.noise = GaussianParams{3.0, 6.0};
  p.secret_noise = GaussianParams{3.0, 6.0};
  p.x_bound = 8;
  p.y_bound = 8;
  return p;
}

TEST(CenterTest, Examples) {
  EXPECT_EQ(*Center(0, 8, Pow2(13)), 0);
  EXPECT_EQ(*Center(3, 8, Pow2(13)), 3072);
  EXPECT_FALSE(Center(8, 8, Pow2(13)).ok());
  EXPECT_FALSE(Center(-1, 8, Pow2(13)).ok());
  // floor(5 * 100 / 7) = 71.
  EXPECT_EQ(*Center(5, 7, 100), 71);
}

TEST(LweSetupTest, ZeroNoiseGivesExactProduct) {
  Rng rng = Rng::FromU64(1);
  auto keys = *LweSetup(ZeroNoiseToy(SecurityMode::kSelective), rng);
  const ZqRing& ring = *keys.mpk.ring;
  for (size_t i = 0; i < 20; ++i) {
    mpz_class dot = 0;
    for (size_t j = 0; j < 4; ++j) {
      dot += ring.Get(keys.mpk.a->At(i, j)) * ring.Get(keys.msk.s_uniform.At(j, 0));
    }
    EXPECT_EQ(ring.Get(keys.mpk.u->At(i, 0)), Mod(dot, ring.modulus()));
  }
}

TEST(LweSetupTest, AdaptiveUIsSTimesA) {
  Rng rng = Rng::FromU64(2);
  auto keys = *LweSetup(ZeroNoiseToy(SecurityMode::kAdaptive), rng);
  const ZqRing& ring = *keys.mpk.ring;
  ASSERT_EQ(keys.mpk.u->rows(), 1u);
  ASSERT_EQ(keys.mpk.u->cols(), 4u);
  for (size_t j = 0; j < 4; ++j) {
    mpz_class dot = 0;
    for (size_t i = 0; i < 20; ++i) {
      dot += mpz_class(static_cast<long>(keys.msk.s_small[i])) *
             ring.Get(keys.mpk.a->At(i, j));
    }
    EXPECT_EQ(ring.Get(keys.mpk.u->At(0, j)), Mod(dot, ring.modulus()));
  }
}

TEST(LweSetupTest, RejectsBadParams) {
  Rng rng = Rng::FromU64(1);
  LweParams p = ZeroNoiseToy(SecurityMode::kSelective);
  p.secret_dim = 0;
  EXPECT_FALSE(LweSetup(p, rng).ok());
  p = ZeroNoiseToy(SecurityMode::kSelective);
  p.modulus = 16;
  EXPECT_FALSE(LweSetup(p, rng).ok());
  p = ZeroNoiseToy(SecurityMode::kSelective);
  p.plaintext_modulus = 8;  // 4 * 2 * 1 is not below 8
  EXPECT_FALSE(LweSetup(p, rng).ok());
}

class LweModeTest : public ::testing::TestWithParam<SecurityMode> {};

TEST_P(LweModeTest, ZeroNoiseEndToEnd) {
  Rng rng = Rng::FromU64(3);
  auto params = ZeroNoiseToy(GetParam());
  auto keys = *LweSetup(params, rng);
  auto ct = *LweEncrypt(keys.mpk, {mpz_class(3)}, rng);
  auto sk = *LweKeygen(keys, {1});
  auto res = LweDecrypt(keys.mpk, ct, sk, 4);
  ASSERT_TRUE(res.ok()) << res.status();
  EXPECT_EQ(*res, 3);

  auto zero = *LweEncrypt(keys.mpk, {mpz_class(0)}, rng);
  EXPECT_EQ(*LweDecrypt(keys.mpk, zero, sk, 4), 0);
  auto neg = *LweEncrypt(keys.mpk, {mpz_class(-3)}, rng);
  EXPECT_EQ(CenteredLift(*LweDecrypt(keys.mpk, neg, sk, 4), 16), -3);
}

TEST_P(LweModeTest, NormBounds) {
  Rng rng = Rng::FromU64(4);
  auto keys = *LweSetup(ZeroNoiseToy(GetParam()), rng);
  EXPECT_FALSE(LweEncrypt(keys.mpk, {mpz_class(4)}, rng).ok());
  EXPECT_FALSE(LweEncrypt(keys.mpk, {mpz_class(-4)}, rng).ok());
  EXPECT_FALSE(LweEncrypt(keys.mpk, {mpz_class(1), mpz_class(1)}, rng).ok());
  EXPECT_FALSE(LweKeygen(keys, {2}).ok());
  EXPECT_FALSE(LweKeygen(keys, {1, 1}).ok());
}

TEST_P(LweModeTest, DeterministicCiphertextBytes) {
  auto params = NoisyToy(GetParam());
  std::vector<uint8_t> first;
  for (int run = 0; run < 2; ++run) {
    Rng rng = Rng::FromU64(99);
    auto keys = *LweSetup(params, rng);
    auto ct = *LweEncrypt(keys.mpk, {1, -2, 3, 7}, rng);
    auto bytes = SerializeCiphertext(*keys.mpk.ring, ct);
    if (run == 0) {
      first = bytes;
    } else {
      EXPECT_EQ(bytes, first);
    }
    auto back = ParseCiphertext(params, *keys.mpk.ring, bytes.data(), bytes.size());
    ASSERT_TRUE(back.ok());
    EXPECT_EQ(*back, ct);
  }
}

TEST_P(LweModeTest, KeygenLinearity) {
  Rng rng = Rng::FromU64(5);
  auto keys = *LweSetup(ZeroNoiseToy(GetParam()), rng);
  const ZqRing& ring = *keys.mpk.ring;
  auto zero = *LweKeygen(keys, {0});
  auto one = *LweKeygen(keys, {1});
  if (GetParam() == SecurityMode::kSelective) {
    for (size_t j = 0; j < 4; ++j) {
      EXPECT_EQ(ring.Get(zero.d_residues.At(j)), 0);
      EXPECT_EQ(ring.Get(one.d_residues.At(j)),
                ring.Get(keys.msk.s_uniform.At(j, 0)));
    }
  } else {
    for (size_t j = 0; j < 20; ++j) {
      EXPECT_EQ(zero.d_small[j], 0);
      EXPECT_EQ(one.d_small[j], keys.msk.s_small[j]);
    }
  }
}

TEST_P(LweModeTest, RandomTrialsWithRealNoise) {
  auto params = NoisyToy(GetParam());
  Rng rng = Rng::FromU64(2024);
  auto keys = *LweSetup(params, rng);
  int correct = 0, flagged = 0, silent_wrong = 0;
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<mpz_class> x(4);
    std::vector<int64_t> y(4);
    long oracle = 0;
    for (size_t i = 0; i < 4; ++i) {
      const long xi = static_cast<long>(rng.UniformU64(15)) - 7;
      const long yi = static_cast<long>(rng.UniformU64(15)) - 7;
      x[i] = xi;
      y[i] = yi;
      oracle += xi * yi;
    }
    auto ct = *LweEncrypt(keys.mpk, x, rng);
    auto sk = *LweKeygen(keys, y);
    auto res = LweDecrypt(keys.mpk, ct, sk, 196);
    if (res.ok() && CenteredLift(*res, 512) == oracle) {
      ++correct;
    } else if (!res.ok() && IsNoiseOverflow(res.status())) {
      ++flagged;
    } else {
      ++silent_wrong;
    }
  }
  EXPECT_GE(correct, 499);
  EXPECT_EQ(silent_wrong, 0);
  EXPECT_EQ(correct + flagged, 500);
}

TEST_P(LweModeTest, LinearEncryption) {
  auto params = NoisyToy(GetParam());
  Rng rng = Rng::FromU64(6);
  auto keys = *LweSetup(params, rng);
  const ZqRing& ring = *keys.mpk.ring;
  auto c1 = *LweEncrypt(keys.mpk, {1, 2, 3, 4}, rng);
  auto c2 = *LweEncrypt(keys.mpk, {-3, 0, 2, 1}, rng);
  LweCiphertext sum = c1;
  for (size_t i = 0; i < sum.ct0.size(); ++i) {
    ring.Add(sum.ct0.At(i), c1.ct0.At(i), c2.ct0.At(i));
  }
  for (size_t i = 0; i < sum.ct1.size(); ++i) {
    ring.Add(sum.ct1.At(i), c1.ct1.At(i), c2.ct1.At(i));
  }
  auto sk = *LweKeygen(keys, {1, 2, 3, -1});
  // <(-2, 2, 5, 5), (1, 2, 3, -1)> = -2 + 4 + 15 - 5.
  auto res = LweDecrypt(keys.mpk, sum, sk, 255);
  ASSERT_TRUE(res.ok()) << res.status();
  EXPECT_EQ(CenteredLift(*res, 512), 12);
}

TEST_P(LweModeTest, ModeMismatch) {
  Rng rng = Rng::FromU64(7);
  auto params = ZeroNoiseToy(GetParam());
  auto keys = *LweSetup(params, rng);
  auto ct = *LweEncrypt(keys.mpk, {mpz_class(1)}, rng);
  auto sk = *LweKeygen(keys, {1});
  sk.mode = GetParam() == SecurityMode::kSelective ? SecurityMode::kAdaptive
                                                   : SecurityMode::kSelective;
  EXPECT_FALSE(LweDecryptPartial(keys.mpk, ct, sk).ok());
}

TEST_P(LweModeTest, Table1SingleTrial) {
  auto params = LwePreset(GetParam(), PresetSource::kTable1);
  Rng rng = Rng::FromU64(12345);
  auto keys = LweSetup(params, rng);
  ASSERT_TRUE(keys.ok()) << keys.status();
  auto ct = *LweEncrypt(keys->mpk, {mpz_class(12345)}, rng);
  auto sk = *LweKeygen(*keys, {1});
  auto res = LweDecrypt(keys->mpk, ct, sk, params.plaintext_modulus / 2);
  ASSERT_TRUE(res.ok()) << res.status();
  EXPECT_EQ(*res, 12345);
  // Fixed-width serialization: (N + 1) or (M + 1) entries per ciphertext.
  const size_t entries = GetParam() == SecurityMode::kSelective ? 81 : 9463;
  const size_t width = GetParam() == SecurityMode::kSelective ? 8 : 31;
  EXPECT_EQ(SerializeCiphertext(*keys->mpk.ring, ct).size(), entries * width);
}

INSTANTIATE_TEST_SUITE_P(Modes, LweModeTest,
                         ::testing::Values(SecurityMode::kSelective,
                                           SecurityMode::kAdaptive));

TEST(LweRecoverTest, FlagsLargeResidual) {
  auto params = ZeroNoiseToy(SecurityMode::kSelective);
  // t(3) = 3 * 8192 / 16 = 1536; a quarter gap is 128.
  EXPECT_EQ(*LweRecover(params, 1536 + 128, 8), 3);
  auto bad = LweRecover(params, 1536 + 129 + 30, 8);
  ASSERT_FALSE(bad.ok());
  EXPECT_TRUE(IsNoiseOverflow(bad.status()));
  auto out_of_range = LweRecover(params, 1536, 2);
  ASSERT_FALSE(out_of_range.ok());
  EXPECT_TRUE(IsNoiseOverflow(out_of_range.status()));
}

}  // namespace
}  // namespace mifefl::lwe
