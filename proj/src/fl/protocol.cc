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

#include "mifefl/fl/protocol.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>
#include <utility>

#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "mifefl/status_macros.h"

namespace mifefl::fl {
namespace {

using mife::MifeCiphertext;

constexpr char kWeightShareDomain[] = "weight-share";
constexpr char kWeightModelDomain[] = "weight-model";
// Cap on baby steps for the label-bearing window (64 MiB of table).
constexpr uint64_t kMaxBabySteps = uint64_t{1} << 22;

uint64_t CeilSqrt(uint64_t v) {
  auto r = static_cast<uint64_t>(std::sqrt(static_cast<double>(v)));
  while (r * r < v) ++r;
  return std::max<uint64_t>(r, 1);
}

int64_t NowNs() {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

std::vector<int64_t> Ones(size_t n) { return std::vector<int64_t>(n, 1); }

absl::Status Annotate(const absl::Status& status, const std::string& what) {
  return absl::Status(status.code(),
                      absl::StrCat(what, ": ", status.message()));
}

}  // namespace

int64_t ProtocolConfig::EncodedBound() const {
  return static_cast<int64_t>(std::floor(w_max * PowerOfTen(delta)));
}

int64_t ProtocolConfig::MaskedBound() const {
  return EncodedBound() + static_cast<int64_t>(label_bound) - 1;
}

DlogWindow ProtocolConfig::AggregateWindow(size_t clients) const {
  const auto c = static_cast<int64_t>(clients);
  return DlogWindow{-c * EncodedBound(), c * MaskedBound()};
}

absl::Status ProtocolConfig::Validate() const {
  if (n < 2) return absl::InvalidArgumentError("the protocol needs n >= 2");
  if (l == 0) return absl::InvalidArgumentError("the model needs l >= 1");
  if (delta < 1 || delta > 12) {
    return absl::InvalidArgumentError(
        absl::StrCat("precision delta must be in [1, 12], got ", delta));
  }
  if (label_bound < kMinLabelBound || label_bound > (uint64_t{1} << 46)) {
    return absl::InvalidArgumentError(
        "label_bound must be in [2^32, 2^46]");
  }
  if (!(w_max >= 1) || w_max > 1e6) {
    return absl::InvalidArgumentError("w_max must be in [1, 1e6]");
  }
  if (load.e_min < 0 || load.e_min > load.e_max || load.s_min < 0 ||
      load.s_min > load.s_max || load.e_max <= 0 || load.s_max <= 0) {
    return absl::InvalidArgumentError("inconsistent epoch/step bounds");
  }
  if (chunks == 0) return absl::InvalidArgumentError("chunks must be >= 1");
  if (max_rounds == 0) {
    return absl::InvalidArgumentError("max_rounds must be >= 1");
  }
  const DlogWindow window = AggregateWindow(n);
  if (absl::Status s = window.Validate(); !s.ok()) {
    return Annotate(s, "aggregate window");
  }
  MIFEFL_ASSIGN_OR_RETURN(mife::MifeConfig mc, MifeParams());
  if (absl::Status s = mc.Validate(); !s.ok()) {
    return Annotate(s, "aggregate window vs scheme");
  }
  return absl::OkStatus();
}

absl::StatusOr<mife::MifeConfig> ProtocolConfig::MifeParams() const {
  mife::MifeConfig mc;
  mc.n = n;
  mc.m = 1;
  mc.scheme = scheme;
  if (mife::IsDdh(scheme)) {
    MIFEFL_ASSIGN_OR_RETURN(mc.group, harness::DdhGroupPreset(preset));
  } else {
    mc.lwe = harness::LwePreset(mife::ModeOf(scheme), preset);
    if (zero_noise) mc.lwe = harness::ZeroNoise(mc.lwe);
  }
  mc.plaintext_bound = mpz_class(std::to_string(MaskedBound()));
  mc.key_bound = 1;
  return mc;
}

absl::StatusOr<ProtocolConfig> ParseScenario(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    return absl::InvalidArgumentError("scenario is not a JSON object");
  }
  ProtocolConfig c;
  try {
    c.n = j.value("n", c.n);
    c.l = j.value("l", c.l);
    c.delta = j.value("delta", c.delta);
    c.label_bound = j.value("label_bound", c.label_bound);
    c.patience = j.value("patience", c.patience);
    c.load.e_min = j.value("e_min", c.load.e_min);
    c.load.e_max = j.value("e_max", c.load.e_max);
    c.load.s_min = j.value("s_min", c.load.s_min);
    c.load.s_max = j.value("s_max", c.load.s_max);
    c.w_max = j.value("w_max", c.w_max);
    c.seed = j.value("seed", c.seed);
    c.chunks = j.value("chunks", c.chunks);
    c.max_rounds = j.value("max_rounds", c.max_rounds);
    c.threaded = j.value("threaded", c.threaded);
    if (j.contains("scheme")) {
      MIFEFL_ASSIGN_OR_RETURN(c.scheme,
                              mife::ParseScheme(j["scheme"].get<std::string>()));
    }
    if (j.contains("preset")) {
      MIFEFL_ASSIGN_OR_RETURN(
          c.preset, harness::ParsePresetSource(j["preset"].get<std::string>()));
    }
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("scenario: ", e.what()));
  }
  MIFEFL_RETURN_IF_ERROR(c.Validate());
  return c;
}

std::string ScenarioToJson(const ProtocolConfig& c) {
  nlohmann::json j = {
      {"n", c.n},
      {"l", c.l},
      {"delta", c.delta},
      {"label_bound", c.label_bound},
      {"patience", c.patience},
      {"e_min", c.load.e_min},
      {"e_max", c.load.e_max},
      {"s_min", c.load.s_min},
      {"s_max", c.load.s_max},
      {"scheme", mife::SchemeName(c.scheme)},
      {"preset", harness::PresetSourceName(c.preset)},
      {"w_max", c.w_max},
      {"seed", c.seed},
      {"chunks", c.chunks},
      {"max_rounds", c.max_rounds},
      {"threaded", c.threaded},
  };
  return j.dump();
}

absl::Status ParallelFor(size_t count, size_t workers,
                         const std::function<absl::Status(size_t)>& fn) {
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (size_t i = 0; i < count; ++i) MIFEFL_RETURN_IF_ERROR(fn(i));
    return absl::OkStatus();
  }
  const size_t per = (count + workers - 1) / workers;
  std::vector<absl::Status> errors(workers);
  std::vector<size_t> failed(workers, count);
  std::vector<std::thread> threads;
  for (size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      const size_t end = std::min(count, (w + 1) * per);
      for (size_t i = w * per; i < end; ++i) {
        absl::Status s = fn(i);
        if (!s.ok()) {
          errors[w] = std::move(s);
          failed[w] = i;
          return;
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  size_t best = count;
  absl::Status result;
  for (size_t w = 0; w < workers; ++w) {
    if (failed[w] < best) {
      best = failed[w];
      result = errors[w];
    }
  }
  return result;
}

absl::StatusOr<std::vector<MifeCiphertext>> EncryptModel(
    const mife::MifeClientKey& csk, const std::vector<int64_t>& masked,
    const Rng& base, size_t chunks) {
  std::vector<MifeCiphertext> out(masked.size());
  MIFEFL_RETURN_IF_ERROR(ParallelFor(
      masked.size(), chunks, [&](size_t j) -> absl::Status {
        Rng rng = base.Derive("param", j);
        auto ct = mife::MifeEncrypt(
            csk, {mpz_class(static_cast<long>(masked[j]))}, rng);
        if (!ct.ok()) {
          return Annotate(ct.status(), absl::StrCat("parameter ", j));
        }
        out[j] = *std::move(ct);
        return absl::OkStatus();
      }));
  return out;
}

// ---------------------------------------------------------------- Tpa

absl::StatusOr<Tpa> Tpa::Create(const ProtocolConfig& config) {
  MIFEFL_RETURN_IF_ERROR(config.Validate());
  Tpa tpa(config, Rng::FromU64(config.seed).Derive("tpa", 0));
  MIFEFL_ASSIGN_OR_RETURN(mife::MifeConfig mc, config.MifeParams());
  MIFEFL_ASSIGN_OR_RETURN(mife::MifeSetupResult setup,
                          mife::MifeSetup(mc, tpa.rng_));
  tpa.msk_ = std::move(setup.msk);
  tpa.rng_.Fill(tpa.seed_);
  return tpa;
}

absl::StatusOr<ClientPackage> Tpa::PackageFor(size_t slot) const {
  MIFEFL_ASSIGN_OR_RETURN(mife::MifeClientKey csk,
                          mife::ClientKeyFor(msk_, slot));
  return ClientPackage{std::move(csk), seed_};
}

absl::StatusOr<mife::MifeFunctionalKey> Tpa::ServerKey() const {
  return mife::MifeKeygen(msk_, Ones(msk_.slots.size()));
}

absl::StatusOr<std::optional<size_t>> Tpa::MaybeRerandomize(
    std::optional<size_t> exclude) {
  if (!config_.rerandomize_on_membership) return std::optional<size_t>();
  std::vector<size_t> candidates;
  for (size_t s : msk_.ActiveSlots()) {
    if (s != exclude) candidates.push_back(s);
  }
  const size_t pick = candidates[rng_.UniformU64(candidates.size())];
  MIFEFL_RETURN_IF_ERROR(mife::MifeRerandomizePad(msk_, pick, rng_));
  return std::optional<size_t>(pick);
}

absl::StatusOr<Tpa::MembershipUpdate> Tpa::Join() {
  MembershipUpdate update;
  MIFEFL_ASSIGN_OR_RETURN(update.slot, mife::MifeAddSlot(msk_, rng_));
  MIFEFL_ASSIGN_OR_RETURN(update.rerandomized, MaybeRerandomize(update.slot));
  config_.n = msk_.slots.size();
  MIFEFL_ASSIGN_OR_RETURN(ClientPackage fresh, PackageFor(update.slot));
  update.packages.push_back(std::move(fresh));
  if (update.rerandomized) {
    MIFEFL_ASSIGN_OR_RETURN(ClientPackage p, PackageFor(*update.rerandomized));
    update.packages.push_back(std::move(p));
  }
  MIFEFL_ASSIGN_OR_RETURN(update.server_key, ServerKey());
  return update;
}

absl::StatusOr<Tpa::MembershipUpdate> Tpa::Dropout(size_t slot) {
  MembershipUpdate update;
  update.slot = slot;
  MIFEFL_RETURN_IF_ERROR(mife::MifeRemoveSlot(msk_, slot));
  MIFEFL_ASSIGN_OR_RETURN(update.rerandomized, MaybeRerandomize(std::nullopt));
  config_.n = msk_.slots.size();
  if (update.rerandomized) {
    MIFEFL_ASSIGN_OR_RETURN(ClientPackage p, PackageFor(*update.rerandomized));
    update.packages.push_back(std::move(p));
  }
  MIFEFL_ASSIGN_OR_RETURN(update.server_key, ServerKey());
  return update;
}

double Tpa::MeanOf(const ScoreRecord& record) const {
  const uint64_t gamma =
      config_.zero_labels
          ? 0
          : DeriveLabel(seed_, record.round, config_.label_bound).gamma;
  return UnmaskAndDecode({record.masked_sum}, gamma, record.n,
                         config_.delta)[0];
}

TerminationVerdict Tpa::Arbitrate(const ScoreLog& log,
                                  const ScoreRecord& current,
                                  const std::map<size_t, bool>& reports) const {
  std::vector<double> window;
  for (const auto& r : log.entries()) window.push_back(MeanOf(r));
  std::optional<double> evicted;
  if (log.evicted()) evicted = MeanOf(*log.evicted());
  TerminationVerdict verdict;
  verdict.arbitrated = true;
  verdict.stop =
      HonestStopDecision(window, evicted, MeanOf(current), config_.patience);
  for (const auto& [slot, stop] : reports) {
    if (stop != verdict.stop) verdict.dishonest.push_back(slot);
  }
  return verdict;
}

// ------------------------------------------------------------- Server

Server::Server(const ProtocolConfig& config, mife::MifeFunctionalKey sk)
    : config_(config), log_(config.patience) {
  keys_.push_back(std::move(sk));
}

void Server::ReceiveKey(mife::MifeFunctionalKey sk) {
  keys_.push_back(std::move(sk));
  anchor_.reset();
}

void Server::Prepare() {
  if (!mife::IsDdh(config_.scheme)) return;
  FullTable();
  RelativeTable();
}

const BabyStepTable* Server::FullTable() {
  const uint64_t want =
      std::min(kMaxBabySteps, CeilSqrt(config_.AggregateWindow(clients()).Size()));
  if (!full_table_ || full_table_->size() < want) {
    full_table_ = std::make_unique<BabyStepTable>(key().config->group, want);
  }
  return full_table_.get();
}

const BabyStepTable* Server::RelativeTable() {
  const uint64_t span =
      4 * static_cast<uint64_t>(clients()) * config_.EncodedBound() + 1;
  const uint64_t want = CeilSqrt(span);
  if (!relative_table_ || relative_table_->size() < want) {
    relative_table_ = std::make_unique<BabyStepTable>(key().config->group, want);
  }
  return relative_table_.get();
}

absl::StatusOr<std::vector<mpz_class>> Server::Combine(
    const std::vector<const std::vector<MifeCiphertext>*>& columns,
    size_t count) {
  const mife::MifeFunctionalKey& sk = key();
  std::vector<mpz_class> combined(count);
  MIFEFL_RETURN_IF_ERROR(
      ParallelFor(count, config_.chunks, [&](size_t j) -> absl::Status {
        std::vector<mpz_class> partials;
        partials.reserve(columns.size());
        for (const auto* column : columns) {
          auto p = mife::MifeDecryptPartial(sk, (*column)[j]);
          if (!p.ok()) return Annotate(p.status(), absl::StrCat("entry ", j));
          partials.push_back(*std::move(p));
        }
        auto c = mife::MifeCombine(sk, partials);
        if (!c.ok()) return Annotate(c.status(), absl::StrCat("entry ", j));
        combined[j] = *std::move(c);
        return absl::OkStatus();
      }));
  return combined;
}

namespace {

// Orders the client columns like the key's slots and checks their shape.
absl::StatusOr<std::vector<const std::vector<MifeCiphertext>*>> OrderColumns(
    const mife::MifeFunctionalKey& sk,
    const std::vector<std::vector<MifeCiphertext>>& columns) {
  std::map<size_t, const std::vector<MifeCiphertext>*> by_slot;
  size_t count = std::numeric_limits<size_t>::max();
  for (const auto& column : columns) {
    if (column.empty()) {
      return absl::InvalidArgumentError("empty ciphertext column");
    }
    const size_t slot = column[0].slot;
    for (const auto& ct : column) {
      if (ct.slot != slot) {
        return absl::InvalidArgumentError(
            absl::StrCat("column of slot ", slot, " mixes slots"));
      }
    }
    if (count != std::numeric_limits<size_t>::max() && column.size() != count) {
      return absl::InvalidArgumentError("ciphertext columns differ in length");
    }
    count = column.size();
    if (!by_slot.emplace(slot, &column).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("two columns for client slot ", slot));
    }
  }
  std::vector<const std::vector<MifeCiphertext>*> ordered;
  for (size_t slot : sk.slots) {
    auto it = by_slot.find(slot);
    if (it == by_slot.end()) {
      return absl::FailedPreconditionError(absl::StrCat(
          "missing ciphertext column for client slot ", slot, " (have ",
          columns.size(), " of ", sk.slots.size(), ")"));
    }
    ordered.push_back(it->second);
  }
  if (by_slot.size() != sk.slots.size()) {
    return absl::InvalidArgumentError("ciphertext column for an unknown slot");
  }
  return ordered;
}

absl::Status MixAndMatchHint(const absl::Status& s, size_t j) {
  return absl::Status(
      s.code(), absl::StrCat("aggregation of entry ", j,
                             " failed (ciphertexts from different rounds?): ",
                             s.message()));
}

}  // namespace

absl::StatusOr<std::vector<int64_t>> Server::Aggregate(
    const std::vector<std::vector<MifeCiphertext>>& columns, uint64_t round) {
  const mife::MifeFunctionalKey& sk = key();
  MIFEFL_ASSIGN_OR_RETURN(auto ordered, OrderColumns(sk, columns));
  const size_t count = ordered[0]->size();
  MIFEFL_ASSIGN_OR_RETURN(std::vector<mpz_class> combined,
                          Combine(ordered, count));
  const DlogWindow window = config_.AggregateWindow(clients());
  std::vector<int64_t> r(count);
  if (!mife::IsDdh(sk.scheme)) {
    MIFEFL_RETURN_IF_ERROR(
        ParallelFor(count, config_.chunks, [&](size_t j) -> absl::Status {
          auto v = mife::MifeRecover(sk, combined[j], window);
          if (!v.ok()) return MixAndMatchHint(v.status(), j);
          r[j] = *v;
          return absl::OkStatus();
        }));
    return r;
  }
  // One search over the label-bearing window, then differences.
  const GroupParams& group = sk.config->group;
  auto first = mife::MifeRecover(sk, combined[0], window, FullTable());
  if (!first.ok()) return MixAndMatchHint(first.status(), 0);
  r[0] = *first;
  const BabyStepTable* rel = RelativeTable();
  const int64_t span = 2 * static_cast<int64_t>(clients()) * config_.EncodedBound();
  const mpz_class inverse = GroupInverse(group, combined[0]);
  MIFEFL_RETURN_IF_ERROR(
      ParallelFor(count - 1, config_.chunks, [&](size_t k) -> absl::Status {
        const size_t j = k + 1;
        auto d = rel->Solve(GroupMul(group, combined[j], inverse),
                            DlogWindow{-span, span});
        if (!d.ok()) return MixAndMatchHint(d.status(), j);
        r[j] = r[0] + *d;
        return absl::OkStatus();
      }));
  anchor_ = Anchor{round, combined[0], r[0]};
  return r;
}

absl::StatusOr<int64_t> Server::AggregateScores(
    const std::vector<MifeCiphertext>& scores, uint64_t round,
    bool use_anchor) {
  std::vector<std::vector<MifeCiphertext>> columns;
  columns.reserve(scores.size());
  for (const auto& ct : scores) columns.push_back({ct});
  const mife::MifeFunctionalKey& sk = key();
  MIFEFL_ASSIGN_OR_RETURN(auto ordered, OrderColumns(sk, columns));
  MIFEFL_ASSIGN_OR_RETURN(std::vector<mpz_class> combined,
                          Combine(ordered, 1));
  const DlogWindow window = config_.AggregateWindow(clients());
  if (mife::IsDdh(sk.scheme) && use_anchor && anchor_ &&
      anchor_->round == round) {
    const GroupParams& group = sk.config->group;
    const int64_t span =
        2 * static_cast<int64_t>(clients()) * config_.EncodedBound();
    auto d = RelativeTable()->Solve(
        GroupMul(group, combined[0], GroupInverse(group, anchor_->element)),
        DlogWindow{-span, span});
    if (!d.ok()) return MixAndMatchHint(d.status(), 0);
    return anchor_->value + *d;
  }
  auto v = mife::MifeRecover(
      sk, combined[0], window,
      mife::IsDdh(sk.scheme) ? FullTable() : nullptr);
  if (!v.ok()) return MixAndMatchHint(v.status(), 0);
  return *v;
}

// ------------------------------------------------------------- Client

Client::Client(const ProtocolConfig& config, ClientPackage package,
               size_t index, const Trainer* trainer)
    : config_(config),
      package_(std::move(package)),
      index_(index),
      trainer_(trainer),
      tracker_(config.patience) {
  w_ = trainer_->InitialModel();
}

RoundLabel Client::Label(uint64_t round, std::string_view domain) const {
  if (config_.zero_labels) return RoundLabel{round, 0};
  return DeriveLabel(package_.seed, round, config_.label_bound, domain);
}

void Client::LocalUpdate(uint64_t round) {
  if (round <= 1) {
    w_ = trainer_->Train(index_, trainer_->InitialModel(), config_.load.e_max,
                         config_.load.s_max);
    trained_ = true;
    return;
  }
  if (load_.epochs > 0 && load_.steps > 0) {
    w_ = trainer_->Train(index_, aggregate_, load_.epochs, load_.steps);
    trained_ = true;
  } else {
    // Sits the round out but still submits the previous aggregate.
    w_ = aggregate_;
    trained_ = false;
  }
}

absl::StatusOr<std::vector<MifeCiphertext>> Client::EncryptParameters(
    uint64_t round, const Rng& base, size_t chunks) const {
  for (size_t j = 0; j < w_.size(); ++j) {
    if (!(std::fabs(w_[j]) <= config_.w_max)) {
      return absl::OutOfRangeError(absl::StrCat(
          "parameter ", j, " = ", w_[j], " exceeds w_max ", config_.w_max));
    }
  }
  MIFEFL_ASSIGN_OR_RETURN(std::vector<int64_t> x,
                          EncodeParameters(w_, config_.delta));
  return EncryptModel(package_.csk, MaskWithLabel(x, Label(round).gamma), base,
                      chunks);
}

const std::vector<double>& Client::ReceiveAggregate(
    uint64_t round, const std::vector<int64_t>& r, size_t clients) {
  sums_ = Unmask(r, Label(round).gamma, clients);
  aggregate_ = Decode(sums_, clients, config_.delta);
  return aggregate_;
}

absl::StatusOr<MifeCiphertext> Client::EncryptScore(uint64_t round,
                                                    const Rng& base) {
  MIFEFL_ASSIGN_OR_RETURN(
      int64_t a, EncodeValue(trainer_->Score(index_, aggregate_), config_.delta));
  // The client compares its own score at the same precision as the mean.
  a_i_ = Decode({a}, 1, config_.delta)[0];
  Rng rng = base.Derive("score", 0);
  return mife::MifeEncrypt(
      package_.csk,
      {mpz_class(static_cast<long>(a + static_cast<int64_t>(Label(round).gamma)))},
      rng);
}

double Client::ReceiveScoreSum(uint64_t round, int64_t r, size_t clients) {
  const double a_mu =
      UnmaskAndDecode({r}, Label(round).gamma, clients, config_.delta)[0];
  load_ = TrainingLoad(a_i_, a_mu, config_.load);
  if (tracker_.Observe(a_mu)) best_ = aggregate_;
  return a_mu;
}

bool Client::ReportStop() const {
  return scripted_.value_or(tracker_.ShouldStop());
}

// ------------------------------------------------------------ Training

absl::StatusOr<Transcript> RunTraining(const ProtocolConfig& config,
                                       const RunOptions& options) {
  MIFEFL_RETURN_IF_ERROR(config.Validate());
  SyntheticTrainer synthetic(config.n, config.l, config.seed, config.load);
  const Trainer* trainer = options.trainer ? options.trainer : &synthetic;

  MIFEFL_ASSIGN_OR_RETURN(Tpa tpa, Tpa::Create(config));
  MIFEFL_ASSIGN_OR_RETURN(mife::MifeFunctionalKey sk, tpa.ServerKey());
  Server server(config, std::move(sk));
  server.Prepare();
  const mife::MifeConfig& mc = *server.key().config;

  std::vector<Client> clients;
  const std::vector<size_t> slots = tpa.Slots();
  for (size_t i = 0; i < slots.size(); ++i) {
    MIFEFL_ASSIGN_OR_RETURN(ClientPackage package, tpa.PackageFor(slots[i]));
    clients.emplace_back(config, std::move(package), i, trainer);
    auto it = options.scripted_reports.find(slots[i]);
    if (it != options.scripted_reports.end()) {
      clients.back().ScriptReport(it->second);
    }
  }
  const size_t n = clients.size();
  const size_t workers = config.threaded ? n : 1;
  const Rng root = Rng::FromU64(config.seed);

  Transcript transcript;
  transcript.config = config;
  for (uint64_t t = 1; t <= config.max_rounds; ++t) {
    RoundRecord rec;
    rec.round = t;
    auto base_for = [&](const Client& c) {
      return root.Derive("client", c.slot()).Derive("round", t);
    };

    int64_t start = NowNs();
    MIFEFL_RETURN_IF_ERROR(ParallelFor(n, workers, [&](size_t i) {
      clients[i].LocalUpdate(t);
      return absl::OkStatus();
    }));
    rec.phase_ns["train"] = NowNs() - start;

    start = NowNs();
    std::vector<std::vector<MifeCiphertext>> columns(n);
    MIFEFL_RETURN_IF_ERROR(ParallelFor(n, workers, [&](size_t i) -> absl::Status {
      auto cts = clients[i].EncryptParameters(t, base_for(clients[i]),
                                              config.chunks);
      if (!cts.ok()) return cts.status();
      columns[i] = *std::move(cts);
      return absl::OkStatus();
    }));
    rec.phase_ns["encrypt"] = NowNs() - start;

    start = NowNs();
    MIFEFL_ASSIGN_OR_RETURN(std::vector<int64_t> r, server.Aggregate(columns, t));
    rec.phase_ns["aggregate"] = NowNs() - start;

    start = NowNs();
    std::vector<MifeCiphertext> scores(n);
    MIFEFL_RETURN_IF_ERROR(ParallelFor(n, workers, [&](size_t i) -> absl::Status {
      clients[i].ReceiveAggregate(t, r, n);
      auto ct = clients[i].EncryptScore(t, base_for(clients[i]));
      if (!ct.ok()) return ct.status();
      scores[i] = *std::move(ct);
      return absl::OkStatus();
    }));
    MIFEFL_ASSIGN_OR_RETURN(int64_t r_score, server.AggregateScores(scores, t));
    std::vector<double> means(n);
    for (size_t i = 0; i < n; ++i) {
      means[i] = clients[i].ReceiveScoreSum(t, r_score, n);
    }
    rec.phase_ns["score"] = NowNs() - start;

    // Termination: unanimous reports stand, otherwise the authority decides.
    const ScoreRecord current{t, n, r_score};
    std::map<size_t, bool> reports;
    for (const auto& c : clients) reports[c.slot()] = c.ReportStop();
    const bool all_stop = std::all_of(reports.begin(), reports.end(),
                                      [](const auto& kv) { return kv.second; });
    const bool none_stop = std::none_of(
        reports.begin(), reports.end(), [](const auto& kv) { return kv.second; });
    TerminationVerdict verdict;
    if (all_stop || none_stop) {
      verdict.stop = all_stop;
    } else {
      verdict = tpa.Arbitrate(server.log(), current, reports);
    }
    server.LogScore(current);

    rec.a_mu = means[0];
    rec.score_sum = Unmask({r_score}, clients[0].Label(t).gamma, n)[0];
    rec.sums = clients[0].aggregate_sums();
    rec.model = clients[0].aggregate();
    for (const auto& c : clients) rec.trainers += c.trained() ? 1 : 0;
    const uint64_t ct_bytes =
        mife::SerializeCiphertext(mc, columns[0][0]).size();
    for (const auto& c : clients) {
      // l parameter ciphertexts, one score ciphertext, one report byte.
      rec.client_bytes[c.slot()] = (config.l + 1) * ct_bytes + 1;
    }
    // r and the score sum go back to every client as 8-byte integers.
    rec.server_bytes = n * (config.l + 1) * 8;
    rec.stop = verdict.stop;
    rec.arbitrated = verdict.arbitrated;
    rec.dishonest = verdict.dishonest;
    transcript.rounds.push_back(std::move(rec));
    if (verdict.stop) {
      transcript.converged = true;
      break;
    }
  }
  transcript.final_score = transcript.rounds.back().a_mu;
  transcript.best_model = clients[0].best_model();
  transcript.functional_keys = server.key_history().size();
  return transcript;
}

std::string TranscriptToJsonLines(const Transcript& transcript,
                                  bool with_timing) {
  std::string out;
  for (const auto& rec : transcript.rounds) {
    nlohmann::json j = {
        {"round", rec.round},
        {"a_mu", rec.a_mu},
        {"score_sum", rec.score_sum},
        {"trainers", rec.trainers},
        {"sums", rec.sums},
        {"model", rec.model},
        {"server_bytes", rec.server_bytes},
        {"stop", rec.stop},
        {"arbitrated", rec.arbitrated},
        {"dishonest", rec.dishonest},
    };
    nlohmann::json bytes = nlohmann::json::object();
    for (const auto& [slot, b] : rec.client_bytes) {
      bytes[std::to_string(slot)] = b;
    }
    j["client_bytes"] = bytes;
    if (with_timing) j["phase_ns"] = rec.phase_ns;
    out += j.dump();
    out += '\n';
  }
  nlohmann::json summary = {
      {"summary", true},
      {"scenario", nlohmann::json::parse(ScenarioToJson(transcript.config))},
      {"rounds", transcript.rounds.size()},
      {"converged", transcript.converged},
      {"final_score", transcript.final_score},
      {"functional_keys", transcript.functional_keys},
  };
  out += summary.dump();
  out += '\n';
  return out;
}

// ------------------------------------------------------------ Weighted

absl::StatusOr<std::vector<double>> WeightedAggregate(
    const std::vector<Client*>& clients,
    const std::vector<WeightedShare>& shares, Server& server, uint64_t round,
    const Rng& rng) {
  if (clients.size() != shares.size()) {
    return absl::InvalidArgumentError("one share per client required");
  }
  if (clients.empty()) return absl::InvalidArgumentError("no clients");
  const size_t n = clients.size();

  // Phase 1: sum of delta_i.
  std::vector<MifeCiphertext> first(n);
  for (size_t i = 0; i < n; ++i) {
    const Client& c = *clients[i];
    const int64_t delta = shares[i].delta();
    if (shares[i].k < 0) {
      return absl::InvalidArgumentError("dataset sizes must be non-negative");
    }
    Rng local = rng.Derive(kWeightShareDomain, c.slot());
    MIFEFL_ASSIGN_OR_RETURN(
        first[i],
        mife::MifeEncrypt(
            c.package().csk,
            {mpz_class(static_cast<long>(
                delta + static_cast<int64_t>(
                            c.Label(round, kWeightShareDomain).gamma)))},
            local));
  }
  MIFEFL_ASSIGN_OR_RETURN(int64_t r1,
                          server.AggregateScores(first, round, false));
  // Every client unmasks the same value.
  const int64_t total =
      Unmask({r1}, clients[0]->Label(round, kWeightShareDomain).gamma, n)[0];
  if (total == 0) {
    return absl::FailedPreconditionError("no client trained this round");
  }

  // Phase 2: sum of (delta_i / total) w_i at precision delta.
  const ProtocolConfig& config = clients[0]->config();
  std::vector<std::vector<MifeCiphertext>> columns(n);
  for (size_t i = 0; i < n; ++i) {
    const Client& c = *clients[i];
    std::vector<double> scaled(c.parameters());
    const double weight = static_cast<double>(shares[i].delta()) /
                          static_cast<double>(total);
    for (auto& v : scaled) v *= weight;
    MIFEFL_ASSIGN_OR_RETURN(std::vector<int64_t> x,
                            EncodeParameters(scaled, config.delta));
    MIFEFL_ASSIGN_OR_RETURN(
        columns[i],
        EncryptModel(c.package().csk,
                     MaskWithLabel(x, c.Label(round, kWeightModelDomain).gamma),
                     rng.Derive(kWeightModelDomain, c.slot()), config.chunks));
  }
  MIFEFL_ASSIGN_OR_RETURN(std::vector<int64_t> r2,
                          server.Aggregate(columns, round));
  // No division by n: the weights already sum to one.
  const std::vector<int64_t> sums =
      Unmask(r2, clients[0]->Label(round, kWeightModelDomain).gamma, n);
  return Decode(sums, 1, config.delta);
}

}  // namespace mifefl::fl
