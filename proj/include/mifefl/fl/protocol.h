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

#ifndef MIFEFL_FL_PROTOCOL_H_
#define MIFEFL_FL_PROTOCOL_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "mifefl/algebra/dlog.h"
#include "mifefl/algebra/rng.h"
#include "mifefl/fl/encoding.h"
#include "mifefl/fl/termination.h"
#include "mifefl/fl/trainer.h"
#include "mifefl/fl/training_load.h"
#include "mifefl/harness/presets.h"
#include "mifefl/mife/mife.h"

namespace mifefl::fl {

struct ProtocolConfig {
  size_t n = 3;   // clients
  size_t l = 10;  // model parameters
  int delta = 2;  // decimal digits kept by the encoding
  uint64_t label_bound = kDefaultLabelBound;
  size_t patience = 3;
  LoadBounds load;
  mife::Scheme scheme = mife::Scheme::kDdhSelective;
  harness::PresetSource preset = harness::PresetSource::kToy;
  // Bound on |w_j|; must be at least 1 so scores fit as well.
  double w_max = 10;
  uint64_t seed = 1;
  // Worker chunks for per-parameter encryption and decryption.
  size_t chunks = 15;
  size_t max_rounds = 100;
  // Run the clients of a phase on their own threads. Transcripts do not
  // depend on this.
  bool threaded = false;

  // Test modes.
  bool rerandomize_on_membership = true;
  bool zero_labels = false;
  bool zero_noise = false;

  // 10^delta * w_max.
  int64_t EncodedBound() const;
  // Inclusive bound on masked plaintexts: EncodedBound + label_bound - 1.
  int64_t MaskedBound() const;
  // Window holding every r_j = sum_i x_ij + n gamma_t for `clients`.
  DlogWindow AggregateWindow(size_t clients) const;
  absl::Status Validate() const;
  absl::StatusOr<mife::MifeConfig> MifeParams() const;
};

// Scenario files are JSON objects keyed like the fields above
// ("n", "l", "delta", "label_bound", "patience", "e_min", "e_max",
// "s_min", "s_max", "scheme", "preset", "w_max", "seed", "chunks",
// "max_rounds", "threaded"). Missing keys keep their defaults.
absl::StatusOr<ProtocolConfig> ParseScenario(const std::string& json_text);
std::string ScenarioToJson(const ProtocolConfig& config);

// What a client receives from the authority.
struct ClientPackage {
  mife::MifeClientKey csk;
  LabelSeed seed{};
};

// Runs fn(0) .. fn(count - 1) over `workers` contiguous chunks. Returns the
// error of the lowest failing index.
absl::Status ParallelFor(size_t count, size_t workers,
                         const std::function<absl::Status(size_t)>& fn);

// l independent m = 1 encryptions. Entry j draws its randomness from
// base.Derive("param", j), so the chunking does not change the output.
absl::StatusOr<std::vector<mife::MifeCiphertext>> EncryptModel(
    const mife::MifeClientKey& csk, const std::vector<int64_t>& masked,
    const Rng& base, size_t chunks);

class Tpa {
 public:
  static absl::StatusOr<Tpa> Create(const ProtocolConfig& config);

  const ProtocolConfig& config() const { return config_; }
  const mife::MifeMasterKey& master_key() const { return msk_; }
  std::vector<size_t> Slots() const { return msk_.ActiveSlots(); }
  absl::StatusOr<ClientPackage> PackageFor(size_t slot) const;
  // sk_y for y = (1, ..., 1) over the active slots.
  absl::StatusOr<mife::MifeFunctionalKey> ServerKey() const;

  struct MembershipUpdate {
    // The joining or leaving slot.
    size_t slot = 0;
    std::optional<size_t> rerandomized;
    // New packages for the newcomer and the re-randomized client.
    std::vector<ClientPackage> packages;
    mife::MifeFunctionalKey server_key;
  };
  absl::StatusOr<MembershipUpdate> Join();
  absl::StatusOr<MembershipUpdate> Dropout(size_t slot);

  double MeanOf(const ScoreRecord& record) const;
  // Consulted when the clients disagree. `reports` maps slot -> stop.
  TerminationVerdict Arbitrate(const ScoreLog& log, const ScoreRecord& current,
                               const std::map<size_t, bool>& reports) const;

 private:
  Tpa(ProtocolConfig config, Rng rng) : config_(config), rng_(std::move(rng)) {}
  absl::StatusOr<std::optional<size_t>> MaybeRerandomize(
      std::optional<size_t> exclude);

  ProtocolConfig config_;
  Rng rng_;
  mife::MifeMasterKey msk_;
  LabelSeed seed_{};
};

class Server {
 public:
  Server(const ProtocolConfig& config, mife::MifeFunctionalKey sk);

  // Membership changes hand the server a replacement key.
  void ReceiveKey(mife::MifeFunctionalKey sk);
  const std::vector<mife::MifeFunctionalKey>& key_history() const {
    return keys_;
  }
  const mife::MifeFunctionalKey& key() const { return keys_.back(); }
  size_t clients() const { return key().slots.size(); }

  // r_j = sum_i x_ij + n gamma_t. `columns` holds one vector of l
  // ciphertexts per client, in any client order.
  absl::StatusOr<std::vector<int64_t>> Aggregate(
      const std::vector<std::vector<mife::MifeCiphertext>>& columns,
      uint64_t round);
  // Sum of one ciphertext per client. Under DDH it is solved relative to
  // the first parameter of the same round when available.
  // With use_anchor false the full window is always searched.
  absl::StatusOr<int64_t> AggregateScores(
      const std::vector<mife::MifeCiphertext>& scores, uint64_t round,
      bool use_anchor = true);
  // Builds the dlog tables ahead of the first round (DDH only).
  void Prepare();

  const ScoreLog& log() const { return log_; }
  void LogScore(const ScoreRecord& record) { log_.Append(record); }

 private:
  absl::StatusOr<std::vector<mpz_class>> Combine(
      const std::vector<const std::vector<mife::MifeCiphertext>*>& columns,
      size_t count);
  const BabyStepTable* FullTable();
  const BabyStepTable* RelativeTable();

  ProtocolConfig config_;
  std::vector<mife::MifeFunctionalKey> keys_;
  ScoreLog log_;
  std::unique_ptr<BabyStepTable> full_table_;
  std::unique_ptr<BabyStepTable> relative_table_;
  // First combined element and its value for the latest aggregated round.
  struct Anchor {
    uint64_t round = 0;
    mpz_class element;
    int64_t value = 0;
  };
  std::optional<Anchor> anchor_;
};

class Client {
 public:
  Client(const ProtocolConfig& config, ClientPackage package, size_t index,
         const Trainer* trainer);

  size_t slot() const { return package_.csk.slot; }
  size_t index() const { return index_; }
  const ProtocolConfig& config() const { return config_; }
  const ClientPackage& package() const { return package_; }
  void UpdatePackage(ClientPackage package) { package_ = std::move(package); }

  RoundLabel Label(uint64_t round, std::string_view domain = "round") const;

  // Round 1 trains from the initial model at the maximum load; later rounds
  // train from the last aggregate, or repeat it when the load is zero.
  void LocalUpdate(uint64_t round);
  bool trained() const { return trained_; }
  const std::vector<double>& parameters() const { return w_; }
  void SetParameters(std::vector<double> w) { w_ = std::move(w); }

  absl::StatusOr<std::vector<mife::MifeCiphertext>> EncryptParameters(
      uint64_t round, const Rng& base, size_t chunks) const;
  // Unmasks and decodes r; returns the aggregated model.
  const std::vector<double>& ReceiveAggregate(uint64_t round,
                                              const std::vector<int64_t>& r,
                                              size_t clients);
  absl::StatusOr<mife::MifeCiphertext> EncryptScore(uint64_t round,
                                                    const Rng& base);
  // Unmasks the score sum, assigns the next load and updates the patience
  // counter. Returns a^mu.
  double ReceiveScoreSum(uint64_t round, int64_t r, size_t clients);
  // The client's stop report; scripted clients may lie.
  bool ReportStop() const;
  void ScriptReport(std::optional<bool> report) { scripted_ = report; }

  double score() const { return a_i_; }
  TrainingLoadResult load() const { return load_; }
  const PatienceTracker& tracker() const { return tracker_; }
  const std::vector<double>& aggregate() const { return aggregate_; }
  const std::vector<int64_t>& aggregate_sums() const { return sums_; }
  const std::vector<double>& best_model() const { return best_; }

 private:
  ProtocolConfig config_;
  ClientPackage package_;
  size_t index_;
  const Trainer* trainer_;
  std::vector<double> w_;
  std::vector<double> aggregate_;
  std::vector<int64_t> sums_;
  std::vector<double> best_;
  double a_i_ = 0;
  TrainingLoadResult load_;
  bool trained_ = false;
  PatienceTracker tracker_;
  std::optional<bool> scripted_;
};

struct RoundRecord {
  uint64_t round = 0;
  double a_mu = 0;
  // Unmasked sums of the encoded scores and parameters.
  int64_t score_sum = 0;
  std::vector<int64_t> sums;
  std::vector<double> model;
  size_t trainers = 0;
  // Wall clock per phase: train, encrypt, aggregate, score.
  std::map<std::string, int64_t> phase_ns;
  // Bytes sent by each client (by slot) and by the server.
  std::map<size_t, uint64_t> client_bytes;
  uint64_t server_bytes = 0;
  bool stop = false;
  bool arbitrated = false;
  std::vector<size_t> dishonest;
};

struct Transcript {
  ProtocolConfig config;
  std::vector<RoundRecord> rounds;
  // False when max_rounds was hit first.
  bool converged = false;
  double final_score = 0;
  std::vector<double> best_model;
  size_t functional_keys = 0;
};

struct RunOptions {
  // Defaults to a SyntheticTrainer seeded from the config.
  const Trainer* trainer = nullptr;
  // slot -> forced stop report.
  std::map<size_t, bool> scripted_reports;
};

absl::StatusOr<Transcript> RunTraining(const ProtocolConfig& config,
                                       const RunOptions& options = {});

// One JSON object per round, then a summary line. Timing fields are
// omitted when `with_timing` is false, which makes equal seeds give equal
// text.
std::string TranscriptToJsonLines(const Transcript& transcript,
                                  bool with_timing = true);

struct WeightedShare {
  int64_t k = 0;  // dataset size
  bool trained = false;
  int64_t delta() const { return trained ? k : 0; }
};

// Two-phase weighted mean sum_i delta_i w_i / sum_i delta_i over the
// clients, each phase under its own label domain. `clients` and `shares`
// are parallel; every client submits in both phases.
absl::StatusOr<std::vector<double>> WeightedAggregate(
    const std::vector<Client*>& clients,
    const std::vector<WeightedShare>& shares, Server& server, uint64_t round,
    const Rng& rng);

}  // namespace mifefl::fl

#endif  // MIFEFL_FL_PROTOCOL_H_
