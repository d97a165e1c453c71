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

#include "mifefl/algebra/dlog.h"

#include <gtest/gtest.h>

#include "mifefl/algebra/group.h"
#include "mifefl/algebra/rng.h"

namespace mifefl {
namespace {

// Exhaustive search, the reference for the windowed solver.
std::optional<int64_t> Exhaustive(const GroupParams& group,
                                  const mpz_class& target, int64_t lower,
                                  int64_t upper) {
  for (int64_t e = lower; e <= upper; ++e) {
    if (GroupExp(group, e) == target) return e;
  }
  return std::nullopt;
}

TEST(BoundedDlogTest, ToyExamples) {
  auto group = *GroupGen("toy");
  EXPECT_EQ(*Exhaustive(group, 18, 0, 10), 3);
  auto r = BoundedDlog(group, 18, DlogWindow{0, 10});
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(*r, 3);

  auto id = BoundedDlog(group, 1, DlogWindow{0, 10});
  ASSERT_TRUE(id.ok());
  EXPECT_EQ(*id, 0);

  EXPECT_FALSE(Exhaustive(group, 5, 0, 2).has_value());
  auto miss = BoundedDlog(group, 5, DlogWindow{0, 2});
  EXPECT_EQ(miss.status().code(), absl::StatusCode::kNotFound);
}

TEST(BoundedDlogTest, IdentityInLargeGroup) {
  auto group = *GroupGen("nist-3072");
  auto r = BoundedDlog(group, 1, DlogWindow{0, 1 << 20});
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(*r, 0);
}

TEST(BoundedDlogTest, AgreesWithExhaustiveSearch) {
  auto group = *GroupGen("toy-512");
  Rng rng = Rng::FromU64(3);
  for (int i = 0; i < 200; ++i) {
    int64_t lower = static_cast<int64_t>(rng.UniformU64(2000)) - 1000;
    int64_t upper = lower + static_cast<int64_t>(rng.UniformU64(300));
    int64_t e = static_cast<int64_t>(rng.UniformU64(2600)) - 1300;
    mpz_class target = GroupExp(group, e);
    auto expected = Exhaustive(group, target, lower, upper);
    auto got = BoundedDlog(group, target, DlogWindow{lower, upper});
    if (expected.has_value()) {
      ASSERT_TRUE(got.ok()) << got.status();
      EXPECT_EQ(*got, *expected);
    } else {
      EXPECT_EQ(got.status().code(), absl::StatusCode::kNotFound);
    }
  }
}

TEST(BoundedDlogTest, InverseOfExponentiation) {
  auto group = *GroupGen("toy-512");
  BabyStepTable table(group, 1 << 15);
  Rng rng = Rng::FromU64(5);
  const DlogWindow window{-(int64_t{1} << 30), int64_t{1} << 30};
  for (int i = 0; i < 100; ++i) {
    int64_t e = static_cast<int64_t>(rng.UniformU64(int64_t{1} << 31)) -
                (int64_t{1} << 30);
    auto got = table.Solve(GroupExp(group, e), window);
    ASSERT_TRUE(got.ok()) << got.status();
    EXPECT_EQ(*got, e);
  }
}

TEST(DlogWindowTest, Validation) {
  EXPECT_TRUE((DlogWindow{0, 10}.Validate().ok()));
  EXPECT_FALSE((DlogWindow{5, 4}.Validate().ok()));
  EXPECT_TRUE((DlogWindow{0, (int64_t{1} << 48) - 1}.Validate().ok()));
  EXPECT_FALSE((DlogWindow{0, int64_t{1} << 48}.Validate().ok()));
}

}  // namespace
}  // namespace mifefl
