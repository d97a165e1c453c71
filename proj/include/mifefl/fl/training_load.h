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

#ifndef MIFEFL_FL_TRAINING_LOAD_H_
#define MIFEFL_FL_TRAINING_LOAD_H_

namespace mifefl::fl {

struct LoadBounds {
  double e_min = 1;
  double e_max = 5;
  double s_min = 10;
  double s_max = 100;
};

struct TrainingLoadResult {
  double epochs = 0;  // c_e
  double steps = 0;   // c_s
};

// Client-side assignment from the client's own score a_i and the mean a_mu.
// Below or at the mean: sigma = |(a_mu - a_i) / a_mu| scales between the
// minimum and maximum; above the mean the client sits the round out. With
// a_mu = 0 (so a_i = 0 too) the client gets the maximum load.
TrainingLoadResult TrainingLoad(double a_i, double a_mu,
                                const LoadBounds& bounds);

}  // namespace mifefl::fl

#endif  // MIFEFL_FL_TRAINING_LOAD_H_
