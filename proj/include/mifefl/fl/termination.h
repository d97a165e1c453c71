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

#ifndef MIFEFL_FL_TERMINATION_H_
#define MIFEFL_FL_TERMINATION_H_

#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <vector>

namespace mifefl::fl {

// Client-side patience rule: a strictly better mean resets the counter and
// saves the model, anything else increments it; stop once the counter
// exceeds the patience.
class PatienceTracker {
 public:
  explicit PatienceTracker(size_t patience) : patience_(patience) {}

  // Returns true when the mean improved on the best so far.
  bool Observe(double a_mu);
  bool ShouldStop() const { return counter_ > patience_; }
  double best() const { return best_; }
  size_t counter() const { return counter_; }

 private:
  size_t patience_;
  double best_ = 0;
  size_t counter_ = 0;
};

// One aggregated score as the server sees it: the decrypted sum still
// carries n * gamma_t.
struct ScoreRecord {
  uint64_t round = 0;
  size_t n = 0;
  int64_t masked_sum = 0;
};

// The server's record of the last r = patience aggregated scores, plus the
// entry most recently pushed out of it.
class ScoreLog {
 public:
  explicit ScoreLog(size_t capacity) : capacity_(capacity) {}

  void Append(const ScoreRecord& record);
  const std::deque<ScoreRecord>& entries() const { return entries_; }
  const std::optional<ScoreRecord>& evicted() const { return evicted_; }
  size_t capacity() const { return capacity_; }

 private:
  size_t capacity_;
  std::deque<ScoreRecord> entries_;
  std::optional<ScoreRecord> evicted_;
};

// Honest decision for the round whose mean is `current`, given the means of
// the logged rounds (oldest first) and of the evicted round, if any. Rounds
// missing from the start of training count as mean 0.
//
// Valid as long as training did not stop in an earlier round: then the best
// mean before the window is the evicted one whenever the window holds no
// improvement, which is the only case that can terminate.
bool HonestStopDecision(const std::vector<double>& window_means,
                        std::optional<double> evicted_mean, double current,
                        size_t patience);

struct TerminationVerdict {
  bool stop = false;
  // Slots whose report differs from the honest decision.
  std::vector<size_t> dishonest;
  // True when the reports disagreed and the authority had to arbitrate.
  bool arbitrated = false;
};

}  // namespace mifefl::fl

#endif  // MIFEFL_FL_TERMINATION_H_
