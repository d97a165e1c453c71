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

#include "mifefl/fl/training_load.h"

#include <cmath>

namespace mifefl::fl {

TrainingLoadResult TrainingLoad(double a_i, double a_mu,
                                const LoadBounds& bounds) {
  if (a_i > a_mu) return {0, 0};
  if (a_mu == 0) return {bounds.e_max, bounds.s_max};
  const double sigma = std::fabs((a_mu - a_i) / a_mu);
  return {bounds.e_min + (bounds.e_max - bounds.e_min) * sigma,
          bounds.s_min + (bounds.s_max - bounds.s_min) * sigma};
}

}  // namespace mifefl::fl
