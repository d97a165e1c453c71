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

// Command-line driver: keys, correctness, bench, train, memcost, sweep.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "mifefl/fl/protocol.h"
#include "mifefl/harness/harness.h"
#include "mifefl/harness/presets.h"
#include "mifefl/mife/mife.h"

namespace {

using mifefl::mife::Scheme;
namespace fl = mifefl::fl;
namespace harness = mifefl::harness;

struct Common {
  std::string scheme = "ddh-selective";
  std::string preset = "toy";
  size_t clients = 3;
  size_t params = 100;
  std::string delta = "2";
  uint64_t seed = 1;
  size_t chunks = 15;
  std::string out;
  double ram_budget_gib = 8;
  std::string scenario;
};

int Fail(const absl::Status& status) {
  std::cerr << "error: " << status << "\n";
  return 1;
}

// Writes to --out when given, else stdout.
int Emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) return Fail(absl::UnavailableError("cannot write " + out));
  f << text;
  return 0;
}

absl::StatusOr<std::vector<Scheme>> Schemes(const std::string& name) {
  if (name == "all") {
    return std::vector<Scheme>(std::begin(mifefl::mife::kAllSchemes),
                               std::end(mifefl::mife::kAllSchemes));
  }
  auto s = mifefl::mife::ParseScheme(name);
  if (!s.ok()) return s.status();
  return std::vector<Scheme>{*s};
}

absl::StatusOr<std::pair<int, int>> DeltaRange(const std::string& text) {
  try {
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
      const int d = std::stoi(text);
      return std::make_pair(d, d);
    }
    return std::make_pair(std::stoi(text.substr(0, colon)),
                          std::stoi(text.substr(colon + 1)));
  } catch (const std::exception&) {
    return absl::InvalidArgumentError("--delta takes N or A:B");
  }
}

// Scenario file first, then explicitly given flags on top.
absl::StatusOr<fl::ProtocolConfig> Scenario(const Common& c, CLI::App* app) {
  fl::ProtocolConfig config;
  if (!c.scenario.empty()) {
    std::ifstream f(c.scenario);
    if (!f) return absl::NotFoundError("cannot read " + c.scenario);
    std::stringstream buf;
    buf << f.rdbuf();
    auto parsed = fl::ParseScenario(buf.str());
    if (!parsed.ok()) return parsed.status();
    config = *parsed;
  } else {
    config.l = 20;
  }
  auto given = [&](const char* flag) { return app->count(flag) > 0; };
  if (given("--scheme")) {
    auto s = mifefl::mife::ParseScheme(c.scheme);
    if (!s.ok()) return s.status();
    config.scheme = *s;
  }
  if (given("--preset")) {
    auto p = harness::ParsePresetSource(c.preset);
    if (!p.ok()) return p.status();
    config.preset = *p;
  }
  if (given("--clients")) config.n = c.clients;
  if (given("--params")) config.l = c.params;
  if (given("--seed")) config.seed = c.seed;
  if (given("--chunks")) config.chunks = c.chunks;
  if (given("--delta")) {
    auto range = DeltaRange(c.delta);
    if (!range.ok()) return range.status();
    config.delta = range->first;
  }
  return config;
}

int RunKeys(const Common& c) {
  auto scheme = mifefl::mife::ParseScheme(c.scheme);
  auto preset = harness::ParsePresetSource(c.preset);
  if (!scheme.ok()) return Fail(scheme.status());
  if (!preset.ok()) return Fail(preset.status());
  fl::ProtocolConfig config;
  config.n = c.clients;
  config.scheme = *scheme;
  config.preset = *preset;
  config.seed = c.seed;
  auto tpa = fl::Tpa::Create(config);
  if (!tpa.ok()) return Fail(tpa.status());
  auto sk = tpa->ServerKey();
  if (!sk.ok()) return Fail(sk.status());
  const std::filesystem::path dir = c.out.empty() ? "." : c.out;
  std::filesystem::create_directories(dir);
  auto write = [&](const std::string& name, const std::vector<uint8_t>& bytes) {
    std::ofstream f(dir / name, std::ios::binary);
    f.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
    std::cout << (dir / name).string() << "\t" << bytes.size() << " bytes\n";
  };
  for (size_t slot : tpa->Slots()) {
    write("client-" + std::to_string(slot) + ".key",
          mifefl::mife::SerializeClientKey(tpa->PackageFor(slot)->csk));
  }
  write("server.key", mifefl::mife::SerializeFunctionalKey(*sk));
  return 0;
}

int RunCorrectness(const Common& c, size_t trials, bool zero_noise) {
  auto schemes = Schemes(c.scheme);
  if (!schemes.ok()) return Fail(schemes.status());
  std::string csv = harness::CsvRow(
      {"suite", "trials", "passed", "noise_flagged", "wrong"});
  bool ok = true;
  for (Scheme s : *schemes) {
    const bool exact = mifefl::mife::IsDdh(s) || zero_noise;
    for (const auto& r :
         {harness::RunMifeCorrectness(s, trials, c.seed, zero_noise),
          harness::RunAggregationCorrectness(s, trials, c.seed, zero_noise)}) {
      csv += harness::CsvRow({r.suite, std::to_string(r.trials),
                              std::to_string(r.passed), std::to_string(r.flagged),
                              std::to_string(r.wrong)});
      ok = ok && r.wrong == 0 && (!exact || r.flagged == 0);
    }
  }
  Emit(csv, c.out);
  return ok ? 0 : 2;
}

int RunBenchCmd(const Common& c, bool digest) {
  auto schemes = Schemes(c.scheme);
  auto preset = harness::ParsePresetSource(c.preset);
  if (!schemes.ok()) return Fail(schemes.status());
  if (!preset.ok()) return Fail(preset.status());
  std::vector<harness::BenchRecord> records;
  for (Scheme s : *schemes) {
    harness::BenchOptions o;
    o.scheme = s;
    o.preset = *preset;
    o.n = c.clients;
    o.l = c.params;
    o.chunks = c.chunks;
    o.seed = c.seed;
    o.ram_budget_bytes = static_cast<uint64_t>(c.ram_budget_gib * (1ull << 30));
    o.digest = digest;
    auto result = harness::RunBench(o);
    if (!result.ok()) return Fail(result.status());
    records.insert(records.end(), result->records.begin(), result->records.end());
    if (digest) {
      std::cerr << mifefl::mife::SchemeName(s) << " ciphertext digest "
                << result->ciphertext_digest << "\n";
    }
  }
  return Emit(harness::BenchCsv(records), c.out);
}

int RunTrain(const Common& c, CLI::App* app) {
  auto config = Scenario(c, app);
  if (!config.ok()) return Fail(config.status());
  auto transcript = fl::RunTraining(*config);
  if (!transcript.ok()) return Fail(transcript.status());
  std::cerr << "rounds " << transcript->rounds.size() << ", converged "
            << (transcript->converged ? "yes" : "no") << ", final a_mu "
            << transcript->final_score << "\n";
  return Emit(fl::TranscriptToJsonLines(*transcript), c.out);
}

int RunMemcost(const Common& c, bool measure) {
  auto schemes = Schemes(c.scheme);
  auto preset = harness::ParsePresetSource(c.preset);
  if (!schemes.ok()) return Fail(schemes.status());
  if (!preset.ok()) return Fail(preset.status());
  std::vector<harness::MemoryCost> costs;
  for (Scheme s : *schemes) {
    auto cost = harness::ComputeMemoryCost(s, *preset, c.clients);
    if (!cost.ok()) return Fail(cost.status());
    if (measure) {
      if (auto st = harness::MeasureMemoryCost(*cost, c.seed); !st.ok()) {
        return Fail(st);
      }
    }
    costs.push_back(*cost);
  }
  return Emit(harness::MemoryCsv(costs, c.params), c.out);
}

int RunSweep(const Common& c, CLI::App* app) {
  auto config = Scenario(c, app);
  if (!config.ok()) return Fail(config.status());
  auto range = DeltaRange(app->count("--delta") ? c.delta : "1:6");
  if (!range.ok()) return Fail(range.status());
  auto rows = harness::DeltaSweep(range->first, range->second, *config);
  if (!rows.ok()) return Fail(rows.status());
  return Emit(harness::SweepCsv(*rows), c.out);
}

void AddCommon(CLI::App* sub, Common& c) {
  sub->add_option("--scheme", c.scheme,
                  "ddh-selective|ddh-adaptive|lwe-selective|lwe-adaptive|all");
  sub->add_option("--preset", c.preset, "toy|table1");
  sub->add_option("--clients", c.clients, "number of clients n");
  sub->add_option("--params", c.params, "model parameters l");
  sub->add_option("--delta", c.delta, "decimal precision; sweep takes A:B");
  sub->add_option("--seed", c.seed, "RNG seed");
  sub->add_option("--chunks", c.chunks, "encryption worker chunks");
  sub->add_option("--out", c.out, "output file (directory for keys)");
  sub->add_option("--ram-budget", c.ram_budget_gib, "RAM budget in GiB");
  sub->add_option("--scenario", c.scenario, "scenario JSON file");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-input functional encryption for federated learning"};
  app.require_subcommand(1);
  Common c;
  size_t trials = 300;
  bool zero_noise = false, digest = false, measure = false;

  auto* keys = app.add_subcommand("keys", "generate and write client and server keys");
  auto* correctness = app.add_subcommand("correctness", "oracle suites");
  auto* bench = app.add_subcommand("bench", "time one protocol round per phase");
  auto* train = app.add_subcommand("train", "run a training scenario");
  auto* memcost = app.add_subcommand("memcost", "memory-table sizes");
  auto* sweep = app.add_subcommand("sweep", "rounds and final score per precision");
  for (auto* sub : {keys, correctness, bench, train, memcost, sweep}) {
    AddCommon(sub, c);
  }
  correctness->add_option("--trials", trials, "trials per suite");
  correctness->add_flag("--zero-noise", zero_noise, "LWE without noise");
  bench->add_flag("--digest", digest, "hash the serialized ciphertexts");
  memcost->add_flag("--measure", measure, "also serialize real keys");

  CLI11_PARSE(app, argc, argv);
  if (keys->parsed()) return RunKeys(c);
  if (correctness->parsed()) return RunCorrectness(c, trials, zero_noise);
  if (bench->parsed()) return RunBenchCmd(c, digest);
  if (train->parsed()) return RunTrain(c, train);
  if (memcost->parsed()) return RunMemcost(c, measure);
  if (sweep->parsed()) return RunSweep(c, sweep);
  return 1;
}
