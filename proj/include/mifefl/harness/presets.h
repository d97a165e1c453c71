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

#ifndef MIFEFL_HARNESS_PRESETS_H_
#define MIFEFL_HARNESS_PRESETS_H_

#include <string>
#include <string_view>

#include "absl/status/statusor.h"
#include "mifefl/algebra/group.h"
#include "mifefl/ipfe/lwe.h"
#include "mifefl/ipfe/mode.h"

namespace mifefl::harness {

enum class PresetSource { kToy, kTable1 };

absl::StatusOr<PresetSource> ParsePresetSource(std::string_view name);
const char* PresetSourceName(PresetSource source);

// toy -> 512-bit safe-prime group, table1 -> 3072-bit MODP group.
absl::StatusOr<GroupParams> DdhGroupPreset(PresetSource source);

// table1 rows: selective N=80, M=5327, log q=63; adaptive N=38, M=9462,
// log q=248. q is the largest prime below 2^63 / 2^248 and the plaintext
// modulus the largest prime below 2^48. Toy: N=16, M=128, q=2^63,
// plaintext modulus 2^48.
//
// The plaintext bound is set to the plaintext modulus (full residues, as
// used by the multi-input compiler) and the key bound to 2.
lwe::LweParams LwePreset(SecurityMode mode, PresetSource source);

// Same dimensions with the noise collapsed to zero (std_dev 1e-4).
lwe::LweParams ZeroNoise(lwe::LweParams params);

// Exact table1 noise rates.
inline constexpr double kTable1AlphaSelective = 1.09e-28;
inline constexpr double kTable1AlphaAdaptive = 1.71e-53;

}  // namespace mifefl::harness

#endif  // MIFEFL_HARNESS_PRESETS_H_
