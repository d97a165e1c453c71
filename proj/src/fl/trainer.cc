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

#include "mifefl/fl/trainer.h"

#include <algorithm>
#include <cmath>

#include "mifefl/algebra/rng.h"

namespace mifefl::fl {
namespace {

constexpr double kCap = 0.99;
// Scores saturate once every parameter is within this distance of the
// client's target; wider than the coarsest encoding step (0.1).
constexpr double kRadius = 0.15;
constexpr double kOffset = 0.02;
// Per-round contraction at the lightest and heaviest load.
constexpr double kKeepBase = 0.8;
constexpr double kLoadGain = 2.2;

}  // namespace

SyntheticTrainer::SyntheticTrainer(size_t clients, size_t params,
                                   uint64_t seed, LoadBounds bounds)
    : bounds_(bounds) {
  Rng rng = Rng::FromU64(seed).Derive("synthetic-target", 0);
  std::vector<double> shared(params);
  for (auto& v : shared) v = 2 * rng.UniformOpenUnit() - 1;
  targets_.assign(clients, shared);
  for (size_t i = 0; i < clients; ++i) {
    Rng local = Rng::FromU64(seed).Derive("synthetic-offset", i);
    for (auto& v : targets_[i]) v += kOffset * (2 * local.UniformOpenUnit() - 1);
  }
}

std::vector<double> SyntheticTrainer::InitialModel() const {
  return std::vector<double>(targets_.empty() ? 0 : targets_[0].size(), 0.0);
}

std::vector<double> SyntheticTrainer::Train(size_t client,
                                            const std::vector<double>& start,
                                            double epochs, double steps) const {
  const auto& target = targets_[client % targets_.size()];
  const double work = (epochs * steps) / (bounds_.e_max * bounds_.s_max);
  const double keep = std::pow(kKeepBase, 1 + kLoadGain * work);
  std::vector<double> out(start.size());
  for (size_t j = 0; j < start.size(); ++j) {
    out[j] = target[j] + (start[j] - target[j]) * keep;
  }
  return out;
}

double SyntheticTrainer::Score(size_t client,
                               const std::vector<double>& model) const {
  const auto& target = targets_[client % targets_.size()];
  double dist = 0;
  for (size_t j = 0; j < model.size(); ++j) {
    dist = std::max(dist, std::fabs(model[j] - target[j]));
  }
  return kCap * std::clamp(1.0 - std::max(0.0, dist - kRadius), 0.0, 1.0);
}

}  // namespace mifefl::fl
