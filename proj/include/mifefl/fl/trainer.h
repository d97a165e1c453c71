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

#ifndef MIFEFL_FL_TRAINER_H_
#define MIFEFL_FL_TRAINER_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mifefl/fl/training_load.h"

namespace mifefl::fl {

// Local training as seen by the protocol. Implementations must be
// deterministic in their arguments.
class Trainer {
 public:
  virtual ~Trainer() = default;
  virtual std::vector<double> InitialModel() const = 0;
  // One local update of `client` from `start` with c_e epochs and c_s steps.
  virtual std::vector<double> Train(size_t client,
                                    const std::vector<double>& start,
                                    double epochs, double steps) const = 0;
  // Validation score of `model` on the client's data, in [0, 1].
  virtual double Score(size_t client, const std::vector<double>& model) const = 0;
};

// Each client owns a target near a shared one. Training contracts the
// distance to the client's target by 0.8^(1 + 2.2 c_e c_s / (e_max s_max));
// the score falls linearly with the sup distance of the model from the
// target and caps at 0.99 inside a small radius.
class SyntheticTrainer : public Trainer {
 public:
  SyntheticTrainer(size_t clients, size_t params, uint64_t seed,
                   LoadBounds bounds);

  std::vector<double> InitialModel() const override;
  std::vector<double> Train(size_t client, const std::vector<double>& start,
                            double epochs, double steps) const override;
  double Score(size_t client, const std::vector<double>& model) const override;

  // Largest |w_j| this trainer can produce.
  static constexpr double kMaxWeight = 1.5;

 private:
  LoadBounds bounds_;
  std::vector<std::vector<double>> targets_;
};

}  // namespace mifefl::fl

#endif  // MIFEFL_FL_TRAINER_H_
