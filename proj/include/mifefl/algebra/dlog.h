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

#ifndef MIFEFL_ALGEBRA_DLOG_H_
#define MIFEFL_ALGEBRA_DLOG_H_

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "mifefl/algebra/group.h"

namespace mifefl {

// Inclusive exponent search range for bounded discrete logarithms.
struct DlogWindow {
  // Largest admissible upper - lower + 1.
  static constexpr uint64_t kMaxSize = uint64_t{1} << 48;

  int64_t lower = 0;
  int64_t upper = 0;

  uint64_t Size() const {
    return static_cast<uint64_t>(upper - lower) + 1;
  }
  absl::Status Validate() const;
};

// Baby-step giant-step table of g^0 .. g^(size-1). Built once, it answers
// any window by ceil(window / size) giant steps, so a caller solving many
// logarithms in the same group can amortize the baby steps.
class BabyStepTable {
 public:
  BabyStepTable(const GroupParams& group, uint64_t size);

  // Returns the smallest e in [window.lower, window.upper] with g^e = target,
  // or NotFound.
  absl::StatusOr<int64_t> Solve(const mpz_class& target,
                                const DlogWindow& window) const;

  uint64_t size() const { return size_; }
  const GroupParams& group() const { return group_; }

 private:
  static uint64_t Key(const mpz_class& element);

  GroupParams group_;
  uint64_t size_;
  // (key of g^j, j), sorted by key.
  std::vector<std::pair<uint64_t, uint64_t>> entries_;
  // g^(-size).
  mpz_class giant_step_;
};

// Solves g^e = target for e in the window with a table of ceil(sqrt(window))
// baby steps. Memory is O(sqrt(window)).
absl::StatusOr<int64_t> BoundedDlog(const GroupParams& group,
                                    const mpz_class& target,
                                    const DlogWindow& window);

}  // namespace mifefl

#endif  // MIFEFL_ALGEBRA_DLOG_H_
