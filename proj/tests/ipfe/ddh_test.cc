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

#include <gtest/gtest.h>

namespace mifefl::ddh {
namespace {

std::vector<mpz_class> Vec(std::initializer_list<long> v) {
  std::vector<mpz_class> out;
  for (long x : v) out.emplace_back(x);
  return out;
}

class ToyDdhTest : public ::testing::Test {
 protected:
  void SetUp() override {
    group_ = *GroupGen("toy");
    keys_ = *DdhSetupFromSecret(group_, Vec({3, 5}));
  }
  GroupParams group_;
  DdhMasterKeys keys_;
};

TEST_F(ToyDdhTest, PublicKeyFromKnownSecret) {
  // 4^3 = 64 = 18 (mod 23), 4^5 = 1024 = 12 (mod 23).
  EXPECT_EQ(keys_.mpk.h, Vec({18, 12}));
}

TEST_F(ToyDdhTest, EncryptKnownRandomness) {
  auto ct = DdhEncryptWithRandomness(keys_.mpk, Vec({1, 2}), 2);
  ASSERT_TRUE(ct.ok());
  // ct0 = 4^2 = 16; ct1 = 18^2 * 4 = 8; ct2 = 12^2 * 16 = 4 (mod 23).
  EXPECT_EQ(ct->head, Vec({16}));
  EXPECT_EQ(ct->body, Vec({8, 4}));
}

TEST_F(ToyDdhTest, ZeroPlaintextZeroRandomness) {
  auto ct = DdhEncryptWithRandomness(keys_.mpk, Vec({0, 0}), 0);
  ASSERT_TRUE(ct.ok());
  EXPECT_EQ(ct->head, Vec({1}));
  EXPECT_EQ(ct->body, Vec({1, 1}));
  auto sk = DdhKeygen(keys_.msk, group_, Vec({4, 9}));
  EXPECT_EQ(*DdhDecryptPartial(group_, *ct, *sk), 1);
  EXPECT_EQ(*DdhDecrypt(group_, *ct, *sk, DlogWindow{0, 10}), 0);
}

TEST_F(ToyDdhTest, KeygenPartialAndDecrypt) {
  auto sk = DdhKeygen(keys_.msk, group_, Vec({1, 1}));
  ASSERT_TRUE(sk.ok());
  EXPECT_EQ(sk->d, Vec({8}));
  auto ct = *DdhEncryptWithRandomness(keys_.mpk, Vec({1, 2}), 2);
  // (8 * 4) * (16^8)^-1 = 18 (mod 23).
  EXPECT_EQ(*DdhDecryptPartial(group_, ct, *sk), 18);
  EXPECT_EQ(*DdhDecrypt(group_, ct, *sk, DlogWindow{0, 10}), 3);
}

TEST_F(ToyDdhTest, ZeroKey) {
  auto sk = DdhKeygen(keys_.msk, group_, Vec({0, 0}));
  ASSERT_TRUE(sk.ok());
  EXPECT_EQ(sk->d, Vec({0}));
  Rng rng = Rng::FromU64(1);
  auto adaptive = *DdhSetup(SecurityMode::kAdaptive, group_, 2, rng);
  auto ska = DdhKeygen(adaptive.msk, group_, Vec({0, 0}));
  EXPECT_EQ(ska->d, Vec({0, 0}));
}

TEST_F(ToyDdhTest, DimensionErrors) {
  Rng rng = Rng::FromU64(1);
  EXPECT_FALSE(DdhSetup(SecurityMode::kSelective, group_, 0, rng).ok());
  EXPECT_FALSE(DdhSetup(SecurityMode::kAdaptive, group_, 0, rng).ok());
  EXPECT_FALSE(DdhEncrypt(keys_.mpk, Vec({1, 2, 3}), rng).ok());
  EXPECT_FALSE(DdhKeygen(keys_.msk, group_, Vec({1, 1, 1, 1, 1})).ok());
}

TEST_F(ToyDdhTest, ModeMismatch) {
  Rng rng = Rng::FromU64(2);
  auto adaptive = *DdhSetup(SecurityMode::kAdaptive, group_, 2, rng);
  auto ct = *DdhEncrypt(keys_.mpk, Vec({1, 1}), rng);
  auto sk = *DdhKeygen(adaptive.msk, group_, Vec({1, 1}));
  EXPECT_FALSE(DdhDecryptPartial(group_, ct, sk).ok());
}

TEST(DdhAdaptiveTest, FirstPublicComponentIsGenerator) {
  auto group = *GroupGen("toy");
  for (uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng = Rng::FromU64(seed);
    auto keys = *DdhSetup(SecurityMode::kAdaptive, group, 1, rng);
    EXPECT_EQ(keys.mpk.g_a[0], group.generator_g);
  }
}

class DdhModeTest : public ::testing::TestWithParam<SecurityMode> {};

TEST_P(DdhModeTest, RandomInnerProductsMatchPlaintextOracle) {
  auto group = *GroupGen("toy-512");
  Rng rng = Rng::FromU64(100);
  const size_t m = 4;
  auto keys = *DdhSetup(GetParam(), group, m, rng);
  DdhEncryptor encryptor(keys.mpk);
  BabyStepTable table(group, 64);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<mpz_class> x(m), y(m);
    long oracle = 0;
    for (size_t i = 0; i < m; ++i) {
      const long xi = static_cast<long>(rng.UniformU64(21));
      const long yi = static_cast<long>(rng.UniformU64(21));
      x[i] = xi;
      y[i] = yi;
      oracle += xi * yi;
    }
    auto ct = trial % 2 == 0 ? encryptor.Encrypt(x, rng) : DdhEncrypt(keys.mpk, x, rng);
    ASSERT_TRUE(ct.ok());
    auto sk = *DdhKeygen(keys.msk, group, y);
    auto c = *DdhDecryptPartial(group, *ct, sk);
    auto got = table.Solve(c, DlogWindow{0, 1600});
    ASSERT_TRUE(got.ok()) << got.status();
    ASSERT_EQ(*got, oracle);
  }
}

TEST_P(DdhModeTest, LinearEncryption) {
  auto group = *GroupGen("toy-512");
  Rng rng = Rng::FromU64(7);
  auto keys = *DdhSetup(GetParam(), group, 3, rng);
  auto x1 = Vec({1, 2, 3}), x2 = Vec({10, 0, 7});
  auto c1 = *DdhEncrypt(keys.mpk, x1, rng);
  auto c2 = *DdhEncrypt(keys.mpk, x2, rng);
  DdhCiphertext sum = c1;
  for (size_t i = 0; i < sum.head.size(); ++i) {
    sum.head[i] = GroupMul(group, c1.head[i], c2.head[i]);
  }
  for (size_t i = 0; i < sum.body.size(); ++i) {
    sum.body[i] = GroupMul(group, c1.body[i], c2.body[i]);
  }
  auto sk = *DdhKeygen(keys.msk, group, Vec({2, 1, 3}));
  // <(11, 2, 10), (2, 1, 3)> = 22 + 2 + 30.
  EXPECT_EQ(*DdhDecrypt(group, sum, sk, DlogWindow{0, 100}), 54);
}

TEST_P(DdhModeTest, EncryptorMatchesReference) {
  auto group = *GroupGen("toy-512");
  Rng setup = Rng::FromU64(8);
  auto keys = *DdhSetup(GetParam(), group, 2, setup);
  DdhEncryptor encryptor(keys.mpk);
  Rng a = Rng::FromU64(9), b = Rng::FromU64(9);
  for (int i = 0; i < 10; ++i) {
    auto x = Vec({i, -i});
    EXPECT_EQ(*encryptor.Encrypt(x, a), *DdhEncrypt(keys.mpk, x, b));
  }
}

TEST_P(DdhModeTest, CiphertextSizeAndRoundTrip) {
  auto group = *GroupGen("nist-3072");
  Rng rng = Rng::FromU64(10);
  auto keys = *DdhSetup(GetParam(), group, 1, rng);
  auto ct = *DdhEncrypt(keys.mpk, Vec({42}), rng);
  auto bytes = SerializeCiphertext(group, ct);
  const size_t elements = GetParam() == SecurityMode::kSelective ? 2 : 3;
  EXPECT_EQ(bytes.size() * 8, elements * 3072);
  auto back = ParseCiphertext(group, GetParam(), 1, bytes.data(), bytes.size());
  ASSERT_TRUE(back.ok());
  EXPECT_EQ(*back, ct);
  auto sk = *DdhKeygen(keys.msk, group, Vec({1}));
  EXPECT_EQ(*DdhDecrypt(group, *back, sk, DlogWindow{0, 100}), 42);
}

INSTANTIATE_TEST_SUITE_P(Modes, DdhModeTest,
                         ::testing::Values(SecurityMode::kSelective,
                                           SecurityMode::kAdaptive));

}  // namespace
}  // namespace mifefl::ddh
