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

#ifndef MIFEFL_FL_ENCODING_H_
#define MIFEFL_FL_ENCODING_H_

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace mifefl::fl {

using LabelSeed = std::array<uint8_t, 32>;

inline constexpr uint64_t kDefaultLabelBound = uint64_t{1} << 40;
inline constexpr uint64_t kMinLabelBound = uint64_t{1} << 32;

struct RoundLabel {
  uint64_t round = 0;
  uint64_t gamma = 0;
};

// gamma_t = HMAC-SHA256(seed, domain || t) reduced into [0, label_bound).
// The default domain labels parameter and score rounds; other phases use
// their own domain so their labels are independent.
RoundLabel DeriveLabel(const LabelSeed& seed, uint64_t round,
                       uint64_t label_bound,
                       std::string_view domain = "round");

// x = trunc(10^delta * w), toward zero. The input is read as its shortest
// round-trip decimal form, so 0.6 at delta 2 gives 60 rather than 59.
absl::StatusOr<int64_t> EncodeValue(double w, int delta);
absl::StatusOr<std::vector<int64_t>> EncodeParameters(
    const std::vector<double>& w, int delta);

std::vector<int64_t> MaskWithLabel(const std::vector<int64_t>& x,
                                   uint64_t gamma);

// m_j = r_j - n * gamma.
std::vector<int64_t> Unmask(const std::vector<int64_t>& r, uint64_t gamma,
                            size_t n);

// w_j = m_j / (10^delta * n).
std::vector<double> Decode(const std::vector<int64_t>& m, size_t n, int delta);

// Unmask followed by Decode.
std::vector<double> UnmaskAndDecode(const std::vector<int64_t>& r,
                                    uint64_t gamma, size_t n, int delta);

int64_t PowerOfTen(int delta);

}  // namespace mifefl::fl

#endif  // MIFEFL_FL_ENCODING_H_
