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

#include "mifefl/fl/encoding.h"

#include <cmath>
#include <limits>
#include <set>

#include <gmpxx.h>
#include <gtest/gtest.h>

#include "mifefl/algebra/rng.h"

namespace mifefl::fl {
namespace {

LabelSeed TestSeed(uint8_t fill) {
  LabelSeed s;
  s.fill(fill);
  return s;
}

TEST(LabelTest, DeterministicAndBounded) {
  const LabelSeed seed = TestSeed(7);
  EXPECT_EQ(DeriveLabel(seed, 5, kDefaultLabelBound).gamma,
            DeriveLabel(seed, 5, kDefaultLabelBound).gamma);
  for (uint64_t t = 1; t <= 1000; ++t) {
    EXPECT_LT(DeriveLabel(seed, t, kMinLabelBound).gamma, kMinLabelBound);
  }
}

TEST(LabelTest, NoCollisionsOverTenThousandRounds) {
  const LabelSeed seed = TestSeed(3);
  std::set<uint64_t> seen;
  for (uint64_t t = 1; t <= 10000; ++t) {
    seen.insert(DeriveLabel(seed, t, kDefaultLabelBound).gamma);
  }
  EXPECT_EQ(seen.size(), 10000u);
}

TEST(LabelTest, SeedAndDomainSeparate) {
  EXPECT_NE(DeriveLabel(TestSeed(1), 9, kDefaultLabelBound).gamma,
            DeriveLabel(TestSeed(2), 9, kDefaultLabelBound).gamma);
  EXPECT_NE(DeriveLabel(TestSeed(1), 9, kDefaultLabelBound).gamma,
            DeriveLabel(TestSeed(1), 9, kDefaultLabelBound, "weight").gamma);
}

TEST(EncodeTest, Examples) {
  EXPECT_EQ(*EncodeValue(0.987, 2), 98);
  EXPECT_EQ(*EncodeValue(0.0, 2), 0);
  EXPECT_EQ(*EncodeValue(0.0, 7), 0);
  EXPECT_EQ(*EncodeValue(-0.555, 2), -55);
  EXPECT_EQ(*EncodeValue(0.6, 2), 60);
  EXPECT_EQ(*EncodeValue(0.29, 2), 29);
  EXPECT_EQ(*EncodeValue(1e-5, 4), 0);
  EXPECT_EQ(*EncodeValue(1.5e3, 1), 15000);
  EXPECT_EQ(*EncodeValue(-2.0, 3), -2000);
}

TEST(EncodeTest, NonFiniteRejected) {
  EXPECT_FALSE(EncodeValue(std::numeric_limits<double>::quiet_NaN(), 2).ok());
  EXPECT_FALSE(EncodeValue(std::numeric_limits<double>::infinity(), 2).ok());
  auto v = EncodeParameters({0.1, 0.2, -std::numeric_limits<double>::infinity()}, 2);
  ASSERT_FALSE(v.ok());
  EXPECT_NE(v.status().message().find("parameter 2"), std::string::npos);
}

TEST(EncodeTest, MatchesDecimalOracle) {
  // Oracle: the value printed with %.17g is exact enough to recover the
  // shortest decimal; compare against mpq arithmetic on that decimal.
  Rng rng = Rng::FromU64(11);
  for (int trial = 0; trial < 2000; ++trial) {
    const double w = (rng.UniformOpenUnit() * 2 - 1) * 50;
    const int delta = 1 + static_cast<int>(rng.UniformU64(6));
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", w);
    // Shortest representation that round-trips.
    for (int prec = 1; prec <= 17; ++prec) {
      std::snprintf(buf, sizeof(buf), "%.*g", prec, w);
      if (std::strtod(buf, nullptr) == w) break;
    }
    std::string text(buf);
    mpq_class q;
    const auto epos = text.find('e');
    std::string mant = text.substr(0, epos);
    int exp10 = epos == std::string::npos ? 0 : std::stoi(text.substr(epos + 1));
    const auto dot = mant.find('.');
    if (dot != std::string::npos) {
      exp10 -= static_cast<int>(mant.size() - dot - 1);
      mant.erase(dot, 1);
    }
    mpz_class num(mant, 10), den = 1, ten = 10;
    exp10 += delta;
    if (exp10 >= 0) {
      mpz_class s;
      mpz_pow_ui(s.get_mpz_t(), ten.get_mpz_t(), exp10);
      num *= s;
    } else {
      mpz_pow_ui(den.get_mpz_t(), ten.get_mpz_t(), -exp10);
    }
    mpz_class expect;
    mpz_tdiv_q(expect.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    ASSERT_EQ(*EncodeValue(w, delta), expect.get_si()) << text << " " << delta;
  }
}

TEST(MaskTest, Examples) {
  EXPECT_EQ(MaskWithLabel({12, -5}, 100), (std::vector<int64_t>{112, 95}));
  EXPECT_EQ(MaskWithLabel({3, 4}, 0), (std::vector<int64_t>{3, 4}));
  EXPECT_EQ(Unmask(MaskWithLabel({12, -5}, 100), 100, 1),
            (std::vector<int64_t>{12, -5}));
}

TEST(DecodeTest, SingleClientRoundTrip) {
  auto x = *EncodeParameters({0.25, -1.5}, 3);
  EXPECT_EQ(UnmaskAndDecode(MaskWithLabel(x, 42), 42, 1, 3),
            (std::vector<double>{0.25, -1.5}));
}

TEST(DecodeTest, ThreeClientMean) {
  const int64_t sum = *EncodeValue(0.10, 2) + *EncodeValue(0.20, 2) +
                      *EncodeValue(0.60, 2);
  EXPECT_EQ(UnmaskAndDecode({sum + 3 * 77}, 77, 3, 2)[0], 0.30);
}

}  // namespace
}  // namespace mifefl::fl
