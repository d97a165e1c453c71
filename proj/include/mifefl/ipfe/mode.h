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

#ifndef MIFEFL_IPFE_MODE_H_
#define MIFEFL_IPFE_MODE_H_

#include <string_view>

namespace mifefl {

// Security notion a scheme variant targets. Selective: challenge messages
// are fixed before the adversary sees mpk. Adaptive: chosen afterwards.
enum class SecurityMode { kSelective, kAdaptive };

constexpr const char* SecurityModeName(SecurityMode mode) {
  return mode == SecurityMode::kSelective ? "selective" : "adaptive";
}

}  // namespace mifefl

#endif  // MIFEFL_IPFE_MODE_H_
