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

#include "mifefl/harness/harness.h"

#include <chrono>
#include <cmath>
#include <cstdio>

#include <sodium.h>

#include "absl/strings/str_cat.h"
#include "mifefl/status_macros.h"

namespace mifefl::harness {
namespace {

using mife::IsDdh;
using mife::Scheme;

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since)
      .count();
}

uint64_t BitLength(const mpz_class& v) {
  return mpz_sizeinbase(v.get_mpz_t(), 2);
}

// log q of the formulas: exact for powers of two, else the bit length.
uint64_t LogQ(const mpz_class& q) {
  const uint64_t bits = BitLength(q);
  return mpz_popcount(q.get_mpz_t()) == 1 ? bits - 1 : bits;
}

mife::MifeConfig ToyMifeConfig(Scheme scheme, size_t n, bool zero_noise) {
  mife::MifeConfig config;
  config.n = n;
  config.m = 2;
  config.scheme = scheme;
  if (IsDdh(scheme)) {
    config.group = *DdhGroupPreset(PresetSource::kToy);
  } else {
    config.lwe = LwePreset(mife::ModeOf(scheme), PresetSource::kToy);
    if (zero_noise) config.lwe = ZeroNoise(config.lwe);
  }
  config.plaintext_bound = 100;
  config.key_bound = 3;
  return config;
}

std::string Hex(const unsigned char* data, size_t size) {
  std::string out;
  char buf[3];
  for (size_t i = 0; i < size; ++i) {
    std::snprintf(buf, sizeof(buf), "%02x", data[i]);
    out += buf;
  }
  return out;
}

std::string FormatDouble(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

absl::StatusOr<MemoryCost> ComputeMemoryCost(Scheme scheme,
                                             PresetSource preset, size_t n) {
  if (n == 0) return absl::InvalidArgumentError("n must be positive");
  MemoryCost cost;
  cost.scheme = scheme;
  cost.preset = preset;
  cost.n = n;
  const uint64_t nn = n;
  if (IsDdh(scheme)) {
    MIFEFL_ASSIGN_OR_RETURN(GroupParams group, DdhGroupPreset(preset));
    cost.log_q = BitLength(group.modulus_p);
    const uint64_t lq = cost.log_q;
    if (scheme == Scheme::kDdhSelective) {
      cost.csk_bits = 2 * lq;
      cost.sk_bits = (nn + 1) * lq + nn;
      cost.ct_bits = 2 * lq;
    } else {
      cost.csk_bits = 3 * lq;
      cost.sk_bits = (2 * nn + 1) * lq + nn;
      cost.ct_bits = 3 * lq;
    }
    return cost;
  }
  const lwe::LweParams p = LwePreset(mife::ModeOf(scheme), preset);
  cost.log_q = LogQ(p.modulus);
  const uint64_t lq = cost.log_q, N = p.secret_dim, M = p.sample_dim;
  if (scheme == Scheme::kLweSelective) {
    cost.csk_bits = lq * (M * N + M + 1);
    cost.sk_bits = lq * (nn * N + 1) + nn;
    cost.ct_bits = lq * (N + 1);
  } else {
    cost.csk_bits = lq * (M * N + N + 1);
    cost.sk_bits = lq * (nn * M + 1) + nn;
    cost.ct_bits = lq * (M + 1);
  }
  return cost;
}

absl::Status MeasureMemoryCost(MemoryCost& cost, uint64_t seed) {
  mife::MifeConfig config;
  config.n = std::max<size_t>(cost.n, 2);
  config.m = 1;
  config.scheme = cost.scheme;
  if (IsDdh(cost.scheme)) {
    MIFEFL_ASSIGN_OR_RETURN(config.group, DdhGroupPreset(cost.preset));
  } else {
    config.lwe = LwePreset(mife::ModeOf(cost.scheme), cost.preset);
  }
  config.plaintext_bound = 1;
  config.key_bound = 1;
  Rng rng = Rng::FromU64(seed).Derive("memcost", 0);
  MIFEFL_ASSIGN_OR_RETURN(mife::MifeSetupResult setup,
                          mife::MifeSetup(config, rng));
  MIFEFL_ASSIGN_OR_RETURN(
      mife::MifeFunctionalKey sk,
      mife::MifeKeygen(setup.msk, std::vector<int64_t>(config.n, 1)));
  MIFEFL_ASSIGN_OR_RETURN(
      mife::MifeCiphertext ct,
      mife::MifeEncrypt(setup.client_keys[0], {mpz_class(1)}, rng));
  const uint64_t h = mife::kBundleHeaderBytes;
  cost.csk_measured_bits =
      8 * (mife::SerializeClientKey(setup.client_keys[0]).size() - h);
  cost.sk_measured_bits = 8 * (mife::SerializeFunctionalKey(sk).size() - h - 1);
  cost.ct_measured_bits = 8 * (mife::SerializeCiphertext(config, ct).size() - h);
  return absl::OkStatus();
}

CorrectnessReport RunMifeCorrectness(Scheme scheme, size_t trials,
                                     uint64_t seed, bool zero_noise) {
  CorrectnessReport report;
  report.suite = absl::StrCat("mife-oracle/", mife::SchemeName(scheme),
                              zero_noise && !IsDdh(scheme) ? "/zero-noise" : "");
  Rng rng = Rng::FromU64(seed).Derive("correctness", static_cast<uint64_t>(scheme));
  const size_t ns[] = {2, 3, 5};
  for (size_t t = 0; t < trials; ++t) {
    const size_t n = ns[t % 3];
    const mife::MifeConfig config = ToyMifeConfig(scheme, n, zero_noise);
    auto setup = mife::MifeSetup(config, rng);
    ++report.trials;
    if (!setup.ok()) {
      ++report.wrong;
      continue;
    }
    std::vector<int64_t> y;
    std::vector<mife::MifeCiphertext> cts;
    long oracle = 0;
    bool failed = false;
    for (const auto& csk : setup->client_keys) {
      std::vector<mpz_class> x;
      for (size_t j = 0; j < config.m; ++j) {
        const long xj = static_cast<long>(rng.UniformU64(201)) - 100;
        const long yj = static_cast<long>(rng.UniformU64(7)) - 3;
        x.emplace_back(xj);
        y.push_back(yj);
        oracle += xj * yj;
      }
      auto ct = mife::MifeEncrypt(csk, x, rng);
      if (!ct.ok()) {
        failed = true;
        break;
      }
      cts.push_back(*std::move(ct));
    }
    auto sk = mife::MifeKeygen(setup->msk, y);
    if (failed || !sk.ok()) {
      ++report.wrong;
      continue;
    }
    auto res = mife::MifeDecrypt(*sk, cts, mife::SymmetricWindow(config));
    if (res.ok() && *res == oracle) {
      ++report.passed;
    } else if (!res.ok() && lwe::IsNoiseOverflow(res.status())) {
      ++report.flagged;
    } else {
      ++report.wrong;
    }
  }
  return report;
}

CorrectnessReport RunAggregationCorrectness(Scheme scheme, size_t trials,
                                            uint64_t seed, bool zero_noise) {
  CorrectnessReport report;
  report.suite = absl::StrCat("aggregation/", mife::SchemeName(scheme),
                              zero_noise && !IsDdh(scheme) ? "/zero-noise" : "");
  if (trials == 0) return report;
  fl::ProtocolConfig config;
  config.n = 3;
  config.l = 3;
  config.scheme = scheme;
  config.seed = seed;
  config.zero_noise = zero_noise;
  config.label_bound = fl::kMinLabelBound;
  config.chunks = 1;
  auto tpa = fl::Tpa::Create(config);
  if (!tpa.ok()) {
    report.trials = report.wrong = trials;
    return report;
  }
  fl::Server server(config, *tpa->ServerKey());
  fl::SyntheticTrainer trainer(config.n, config.l, seed, config.load);
  std::vector<fl::Client> clients;
  for (size_t slot : tpa->Slots()) {
    clients.emplace_back(config, *tpa->PackageFor(slot), clients.size(),
                         &trainer);
  }
  Rng rng = Rng::FromU64(seed).Derive("aggregation", 0);
  for (uint64_t t = 1; t <= trials; ++t) {
    ++report.trials;
    std::vector<int64_t> expect(config.l, 0);
    std::vector<std::vector<mife::MifeCiphertext>> columns;
    bool failed = false;
    for (auto& c : clients) {
      std::vector<double> w(config.l);
      for (auto& v : w) v = (2 * rng.UniformOpenUnit() - 1) * config.w_max;
      for (size_t j = 0; j < config.l; ++j) {
        expect[j] += *fl::EncodeValue(w[j], config.delta);
      }
      c.SetParameters(w);
      auto cts = c.EncryptParameters(t, rng.Derive("client", c.slot() * 1000003 + t),
                                     config.chunks);
      if (!cts.ok()) {
        failed = true;
        break;
      }
      columns.push_back(*std::move(cts));
    }
    if (failed) {
      ++report.wrong;
      continue;
    }
    auto r = server.Aggregate(columns, t);
    if (!r.ok()) {
      ++(lwe::IsNoiseOverflow(r.status()) ? report.flagged : report.wrong);
      continue;
    }
    clients[0].ReceiveAggregate(t, *r, config.n);
    ++(clients[0].aggregate_sums() == expect ? report.passed : report.wrong);
  }
  return report;
}

absl::StatusOr<BenchResult> RunBench(const BenchOptions& options) {
  MIFEFL_ASSIGN_OR_RETURN(
      MemoryCost cost, ComputeMemoryCost(options.scheme, options.preset, options.n));
  BenchResult result;
  result.estimated_bytes = cost.RoundCiphertextBytes(options.l) +
                           static_cast<double>(options.n) * cost.csk_bits / 8.0;
  if (result.estimated_bytes > static_cast<double>(options.ram_budget_bytes)) {
    return absl::ResourceExhaustedError(absl::StrCat(
        "one round needs about ", FormatDouble(result.estimated_bytes / (1 << 30)),
        " GiB of ciphertexts and keys, over the ",
        FormatDouble(static_cast<double>(options.ram_budget_bytes) / (1 << 30)),
        " GiB budget (the adaptive LWE round at n=13, l=4641 alone is about "
        "16.5 GiB); raise --ram-budget to run it anyway"));
  }
  fl::ProtocolConfig config;
  config.n = options.n;
  config.l = options.l;
  config.scheme = options.scheme;
  config.preset = options.preset;
  config.seed = options.seed;
  config.chunks = options.chunks;
  MIFEFL_ASSIGN_OR_RETURN(fl::Tpa tpa, fl::Tpa::Create(config));
  MIFEFL_ASSIGN_OR_RETURN(mife::MifeFunctionalKey sk, tpa.ServerKey());
  fl::Server server(config, std::move(sk));
  server.Prepare();
  fl::SyntheticTrainer trainer(config.n, config.l, config.seed, config.load);
  std::vector<fl::Client> clients;
  for (size_t slot : tpa.Slots()) {
    MIFEFL_ASSIGN_OR_RETURN(fl::ClientPackage package, tpa.PackageFor(slot));
    clients.emplace_back(config, std::move(package), clients.size(), &trainer);
  }
  const std::string name = mife::SchemeName(options.scheme);
  const Rng root = Rng::FromU64(options.seed);

  auto start = std::chrono::steady_clock::now();
  for (auto& c : clients) c.LocalUpdate(1);
  result.records.push_back({name, "train", Seconds(start), options.n, options.l, 0});

  start = std::chrono::steady_clock::now();
  std::vector<std::vector<mife::MifeCiphertext>> columns;
  for (auto& c : clients) {
    MIFEFL_ASSIGN_OR_RETURN(
        auto cts, c.EncryptParameters(
                      1, root.Derive("client", c.slot()).Derive("round", 1),
                      options.chunks));
    columns.push_back(std::move(cts));
  }
  const double encrypt_seconds = Seconds(start);
  const mife::MifeConfig& mc = *server.key().config;
  const uint64_t ct_bytes = mife::SerializeCiphertext(mc, columns[0][0]).size();
  result.records.push_back({name, "encrypt", encrypt_seconds, options.n,
                            options.l, ct_bytes * options.n * options.l});

  start = std::chrono::steady_clock::now();
  MIFEFL_ASSIGN_OR_RETURN(std::vector<int64_t> r, server.Aggregate(columns, 1));
  result.records.push_back({name, "aggregate", Seconds(start), options.n,
                            options.l, 8 * r.size() * options.n});

  if (options.digest) {
    crypto_generichash_state state;
    crypto_generichash_init(&state, nullptr, 0, 32);
    for (const auto& column : columns) {
      for (const auto& ct : column) {
        const auto bytes = mife::SerializeCiphertext(mc, ct);
        crypto_generichash_update(&state, bytes.data(), bytes.size());
      }
    }
    unsigned char out[32];
    crypto_generichash_final(&state, out, sizeof(out));
    result.ciphertext_digest = Hex(out, sizeof(out));
  }
  return result;
}

absl::StatusOr<std::vector<SweepRow>> DeltaSweep(
    int delta_min, int delta_max, const fl::ProtocolConfig& scenario) {
  if (delta_min > delta_max) {
    return absl::InvalidArgumentError("empty precision range");
  }
  std::vector<SweepRow> rows;
  for (int delta = delta_min; delta <= delta_max; ++delta) {
    fl::ProtocolConfig config = scenario;
    config.delta = delta;
    MIFEFL_ASSIGN_OR_RETURN(fl::Transcript t, fl::RunTraining(config));
    rows.push_back({delta, t.rounds.size(), t.final_score, t.converged});
  }
  return rows;
}

std::string CsvField(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string CsvRow(const std::vector<std::string>& fields) {
  std::string out;
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out += ',';
    out += CsvField(fields[i]);
  }
  out += "\r\n";
  return out;
}

std::string BenchCsv(const std::vector<BenchRecord>& records) {
  std::string out = CsvRow({"scheme", "phase", "seconds", "n", "l", "bytes"});
  for (const auto& r : records) {
    char secs[32];
    std::snprintf(secs, sizeof(secs), "%.6f", r.seconds);
    out += CsvRow({r.scheme, r.phase, secs, std::to_string(r.n),
                   std::to_string(r.l), std::to_string(r.bytes)});
  }
  return out;
}

std::string SweepCsv(const std::vector<SweepRow>& rows) {
  std::string out = CsvRow({"delta", "rounds", "final_score", "converged"});
  for (const auto& r : rows) {
    out += CsvRow({std::to_string(r.delta), std::to_string(r.rounds),
                   FormatDouble(r.final_score), r.converged ? "true" : "false"});
  }
  return out;
}

std::string MemoryCsv(const std::vector<MemoryCost>& costs, size_t l) {
  std::string out = CsvRow({"scheme", "preset", "n", "log_q", "csk_bits",
                            "sk_bits", "ct_bits", "csk_measured_bits",
                            "sk_measured_bits", "ct_measured_bits", "l",
                            "round_ct_bytes"});
  auto opt = [](const std::optional<uint64_t>& v) {
    return v ? std::to_string(*v) : std::string();
  };
  for (const auto& c : costs) {
    char round[32];
    std::snprintf(round, sizeof(round), "%.0f", c.RoundCiphertextBytes(l));
    out += CsvRow({mife::SchemeName(c.scheme), PresetSourceName(c.preset),
                   std::to_string(c.n), std::to_string(c.log_q),
                   std::to_string(c.csk_bits), std::to_string(c.sk_bits),
                   std::to_string(c.ct_bits), opt(c.csk_measured_bits),
                   opt(c.sk_measured_bits), opt(c.ct_measured_bits),
                   std::to_string(l), round});
  }
  return out;
}

}  // namespace mifefl::harness
