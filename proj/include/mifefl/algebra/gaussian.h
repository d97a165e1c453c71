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

#ifndef MIFEFL_ALGEBRA_GAUSSIAN_H_
#define MIFEFL_ALGEBRA_GAUSSIAN_H_

#include <cstdint>

#include <gmpxx.h>

#include "absl/status/status.h"
#include "mifefl/algebra/rng.h"

namespace mifefl {

struct GaussianParams {
  double std_dev = 3.0;
  // Samples farther than tail_cut * std_dev from zero are rejected.
  double tail_cut = 6.0;

  absl::Status Validate() const;
};

// Integer Gaussian sample: a continuous normal deviate scaled by std_dev,
// rounded to the nearest integer, rejected and redrawn beyond the tail cut.
// Requires std_dev * tail_cut < 2^62.
int64_t GaussianSample(const GaussianParams& params, Rng& rng);

// Same distribution for widths that exceed 64-bit integers (adaptive LWE
// noise at table1 scale is ~2^73). Resolution is that of a double.
mpz_class GaussianSampleWide(const GaussianParams& params, Rng& rng);

// True when GaussianSample() can represent every accepted value.
bool FitsNarrowSampler(const GaussianParams& params);

}  // namespace mifefl

#endif  // MIFEFL_ALGEBRA_GAUSSIAN_H_
