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

#include "mifefl/algebra/rng.h"

#include <set>

#include <gtest/gtest.h>

namespace mifefl {
namespace {

TEST(RngTest, SameSeedSameStream) {
  Rng a = Rng::FromU64(123), b = Rng::FromU64(123);
  for (int i = 0; i < 5000; ++i) ASSERT_EQ(a.NextU64(), b.NextU64());
}

TEST(RngTest, DifferentSeedsDiffer) {
  Rng a = Rng::FromU64(1), b = Rng::FromU64(2);
  EXPECT_NE(a.NextU64(), b.NextU64());
}

TEST(RngTest, DeriveIsIndependentOfParentPosition) {
  Rng parent = Rng::FromU64(5);
  Rng c1 = parent.Derive("enc", 3);
  parent.NextU64();
  Rng c2 = parent.Derive("enc", 3);
  EXPECT_EQ(c1.NextU64(), c2.NextU64());
  EXPECT_NE(parent.Derive("enc", 4).NextU64(), parent.Derive("enc", 3).NextU64());
  EXPECT_NE(parent.Derive("dec", 3).NextU64(), parent.Derive("enc", 3).NextU64());
}

TEST(RngTest, UniformStaysInRange) {
  Rng rng = Rng::FromU64(8);
  std::set<uint64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    uint64_t v = rng.UniformU64(7);
    ASSERT_LT(v, 7u);
    seen.insert(v);
  }
  EXPECT_EQ(seen.size(), 7u);
  mpz_class bound("1000000000000000000000000000007");
  for (int i = 0; i < 200; ++i) {
    mpz_class v = rng.Uniform(bound);
    ASSERT_GE(v, 0);
    ASSERT_LT(v, bound);
  }
  for (int i = 0; i < 1000; ++i) {
    double u = rng.UniformOpenUnit();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

}  // namespace
}  // namespace mifefl
