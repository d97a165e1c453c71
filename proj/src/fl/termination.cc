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

#include "mifefl/fl/termination.h"

#include <algorithm>

namespace mifefl::fl {

bool PatienceTracker::Observe(double a_mu) {
  if (a_mu > best_) {
    best_ = a_mu;
    counter_ = 0;
    return true;
  }
  ++counter_;
  return false;
}

void ScoreLog::Append(const ScoreRecord& record) {
  if (capacity_ == 0) {
    evicted_ = record;
    return;
  }
  entries_.push_back(record);
  if (entries_.size() > capacity_) {
    evicted_ = entries_.front();
    entries_.pop_front();
  }
}

bool HonestStopDecision(const std::vector<double>& window_means,
                        std::optional<double> evicted_mean, double current,
                        size_t patience) {
  // The window covers the current round and the logged ones; a stop needs
  // patience + 1 rounds without improvement.
  if (window_means.size() < patience) return false;
  const double reference = evicted_mean.value_or(0.0);
  double best = reference;
  for (double a : window_means) {
    if (a > best) return false;
    best = std::max(best, a);
  }
  return current <= best;
}

}  // namespace mifefl::fl
