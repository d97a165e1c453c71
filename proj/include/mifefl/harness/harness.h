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

#ifndef MIFEFL_HARNESS_HARNESS_H_
#define MIFEFL_HARNESS_HARNESS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "mifefl/fl/protocol.h"
#include "mifefl/harness/presets.h"
#include "mifefl/mife/mife.h"

namespace mifefl::harness {

// Sizes of one client key, the server key and one m = 1 ciphertext.
struct MemoryCost {
  mife::Scheme scheme = mife::Scheme::kDdhSelective;
  PresetSource preset = PresetSource::kToy;
  size_t n = 0;
  uint64_t log_q = 0;
  // Memory-table formulas, in bits.
  uint64_t csk_bits = 0;
  uint64_t sk_bits = 0;
  uint64_t ct_bits = 0;
  // Serialized sizes without bundle headers, in bits, when measured.
  std::optional<uint64_t> csk_measured_bits;
  std::optional<uint64_t> sk_measured_bits;
  std::optional<uint64_t> ct_measured_bits;

  // n * l ciphertexts, in bytes.
  double RoundCiphertextBytes(size_t l) const {
    return static_cast<double>(n) * static_cast<double>(l) *
           static_cast<double>(ct_bits) / 8.0;
  }
};

// log q is the element width for DDH (3072 at table1) and the bit length of
// the LWE modulus.
absl::StatusOr<MemoryCost> ComputeMemoryCost(mife::Scheme scheme,
                                             PresetSource preset, size_t n);
// Adds sizes measured by serializing freshly generated keys.
absl::Status MeasureMemoryCost(MemoryCost& cost, uint64_t seed);

struct CorrectnessReport {
  std::string suite;
  size_t trials = 0;
  size_t passed = 0;
  // Failures reported as noise overflow (LWE only).
  size_t flagged = 0;
  // Wrong answers returned without a flag.
  size_t wrong = 0;
};

// Brute-force oracle suite: n cycles through {2, 3, 5}, m = 2,
// x in [-100, 100], y in [-3, 3], at toy parameters.
CorrectnessReport RunMifeCorrectness(mife::Scheme scheme, size_t trials,
                                     uint64_t seed, bool zero_noise);
// Encrypted server aggregation vs plaintext sums of encoded models.
CorrectnessReport RunAggregationCorrectness(mife::Scheme scheme,
                                            size_t trials, uint64_t seed,
                                            bool zero_noise);

struct BenchRecord {
  std::string scheme;
  std::string phase;  // train, encrypt, aggregate
  double seconds = 0;
  size_t n = 0;
  size_t l = 0;
  uint64_t bytes = 0;
};

struct BenchOptions {
  mife::Scheme scheme = mife::Scheme::kDdhSelective;
  PresetSource preset = PresetSource::kToy;
  size_t n = 3;
  size_t l = 100;
  size_t chunks = 15;
  uint64_t seed = 1;
  uint64_t ram_budget_bytes = uint64_t{8} << 30;
  // Also hash every serialized ciphertext.
  bool digest = false;
};

struct BenchResult {
  std::vector<BenchRecord> records;
  std::string ciphertext_digest;  // hex, when requested
  double estimated_bytes = 0;
};

// One protocol round timed per phase. Refuses when the round's
// ciphertexts would not fit the RAM budget.
absl::StatusOr<BenchResult> RunBench(const BenchOptions& options);

struct SweepRow {
  int delta = 0;
  size_t rounds = 0;
  double final_score = 0;
  bool converged = false;
};

absl::StatusOr<std::vector<SweepRow>> DeltaSweep(
    int delta_min, int delta_max, const fl::ProtocolConfig& scenario);

// RFC 4180 quoting: fields with commas, quotes or line breaks are quoted
// and embedded quotes doubled. Rows end with CRLF.
std::string CsvField(const std::string& field);
std::string CsvRow(const std::vector<std::string>& fields);

std::string BenchCsv(const std::vector<BenchRecord>& records);
std::string SweepCsv(const std::vector<SweepRow>& rows);
std::string MemoryCsv(const std::vector<MemoryCost>& costs, size_t l);

}  // namespace mifefl::harness

#endif  // MIFEFL_HARNESS_HARNESS_H_
