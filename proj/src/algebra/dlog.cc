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

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"

namespace mifefl {

absl::Status DlogWindow::Validate() const {
  if (lower > upper) {
    return absl::InvalidArgumentError("dlog window has lower > upper");
  }
  // upper - lower may overflow int64 for extreme bounds; compare in unsigned.
  const uint64_t span =
      static_cast<uint64_t>(upper) - static_cast<uint64_t>(lower);
  if (span >= kMaxSize) {
    return absl::InvalidArgumentError(
        absl::StrCat("dlog window of size ", span, "+1 exceeds 2^48"));
  }
  return absl::OkStatus();
}

uint64_t BabyStepTable::Key(const mpz_class& element) {
  return mpz_getlimbn(element.get_mpz_t(), 0);
}

BabyStepTable::BabyStepTable(const GroupParams& group, uint64_t size)
    : group_(group), size_(std::max<uint64_t>(size, 1)) {
  entries_.reserve(size_);
  mpz_class current = 1;
  for (uint64_t j = 0; j < size_; ++j) {
    entries_.emplace_back(Key(current), j);
    current *= group_.generator_g;
    mpz_mod(current.get_mpz_t(), current.get_mpz_t(),
            group_.modulus_p.get_mpz_t());
  }
  std::sort(entries_.begin(), entries_.end());
  giant_step_ = GroupExp(group_, -mpz_class(static_cast<unsigned long>(size_)));
}

absl::StatusOr<int64_t> BabyStepTable::Solve(const mpz_class& target,
                                             const DlogWindow& window) const {
  if (absl::Status s = window.Validate(); !s.ok()) return s;
  // Shift so the search runs over [0, span].
  mpz_class shifted =
      GroupMul(group_, target,
               GroupExp(group_, -mpz_class(static_cast<long>(window.lower))));
  const uint64_t span = window.Size() - 1;
  const uint64_t giants = span / size_ + 1;
  for (uint64_t i = 0; i < giants; ++i) {
    const uint64_t key = Key(shifted);
    auto it = std::lower_bound(entries_.begin(), entries_.end(),
                               std::make_pair(key, uint64_t{0}));
    uint64_t best = UINT64_MAX;
    for (; it != entries_.end() && it->first == key; ++it) {
      const uint64_t offset = i * size_ + it->second;
      if (offset > span || offset >= best) continue;
      // Keys are truncated elements; confirm the candidate.
      mpz_class check = GroupExp(group_, mpz_class(static_cast<unsigned long>(it->second)));
      if (check == shifted) best = offset;
    }
    if (best != UINT64_MAX) {
      return window.lower + static_cast<int64_t>(best);
    }
    shifted = GroupMul(group_, shifted, giant_step_);
  }
  return absl::NotFoundError("no exponent in the dlog window");
}

absl::StatusOr<int64_t> BoundedDlog(const GroupParams& group,
                                    const mpz_class& target,
                                    const DlogWindow& window) {
  if (absl::Status s = window.Validate(); !s.ok()) return s;
  const auto size = static_cast<uint64_t>(
      std::ceil(std::sqrt(static_cast<double>(window.Size()))));
  BabyStepTable table(group, size);
  return table.Solve(target, window);
}

}  // namespace mifefl
