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

#include "mifefl/algebra/gaussian.h"

#include <cmath>
#include <numbers>

namespace mifefl {
namespace {

// One standard normal deviate (Box-Muller, cosine branch only so that the
// number of bytes drawn per sample is fixed).
double StandardNormal(Rng& rng) {
  const double u1 = rng.UniformOpenUnit();
  const double u2 = rng.UniformOpenUnit();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

absl::Status GaussianParams::Validate() const {
  if (!(std_dev > 0.0) || !std::isfinite(std_dev)) {
    return absl::InvalidArgumentError("gaussian std_dev must be positive");
  }
  if (!(tail_cut >= 6.0) || !std::isfinite(tail_cut)) {
    return absl::InvalidArgumentError("gaussian tail_cut must be >= 6");
  }
  return absl::OkStatus();
}

bool FitsNarrowSampler(const GaussianParams& params) {
  return params.std_dev * params.tail_cut < 0x1.0p62;
}

int64_t GaussianSample(const GaussianParams& params, Rng& rng) {
  const double bound = params.tail_cut * params.std_dev;
  for (;;) {
    const double x = std::nearbyint(params.std_dev * StandardNormal(rng));
    if (std::fabs(x) <= bound) return static_cast<int64_t>(x);
  }
}

mpz_class GaussianSampleWide(const GaussianParams& params, Rng& rng) {
  if (FitsNarrowSampler(params)) {
    return mpz_class(static_cast<long>(GaussianSample(params, rng)));
  }
  const double bound = params.tail_cut * params.std_dev;
  for (;;) {
    const double x = std::nearbyint(params.std_dev * StandardNormal(rng));
    if (std::fabs(x) <= bound) return mpz_class(x);
  }
}

}  // namespace mifefl
