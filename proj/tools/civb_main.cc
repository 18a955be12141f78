// Copyright 2026 The civb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// civb: cochlear-implant speech coding simulator.
//
//   civb matrix --input speech.wav --out-dir results/
//   civb run --input speech.wav --method proposed --conditions 5 --rates 10000
//   civb encode --input speech.wav --out-dir results/
//   civb resynth --input speech.wav --out-dir results/
//
// Exit codes: 0 ok, 2 bad arguments or config, 3 file errors, 4 numeric
// failure.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "civb/error.h"
#include "civb/pipeline.h"
#include "civb/signal_io.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadArgs = 2;
constexpr int kExitFile = 3;
constexpr int kExitNumeric = 4;

int ExitCodeFor(const civb::Error& e) {
  switch (e.code()) {
    case civb::ErrorCode::kInvalidArgument:
      return kExitBadArgs;
    case civb::ErrorCode::kFileUnreadable:
    case civb::ErrorCode::kFileUnwritable:
    case civb::ErrorCode::kUnsupportedEncoding:
    case civb::ErrorCode::kMalformedFile:
      return kExitFile;
    case civb::ErrorCode::kDegenerateInput:
    case civb::ErrorCode::kNumeric:
      return kExitNumeric;
  }
  return kExitNumeric;
}

struct Options {
  std::string input;
  std::string rates;
  std::string conditions;
  std::string method;
  std::string config;
  std::string noise_file;
  std::string reference;
  std::string out_dir = ".";
  long long seed = -1;
  int threads = 0;
};

void AddCommonFlags(CLI::App* cmd, Options& o) {
  cmd->add_option("--input", o.input, "Input speech WAV (16-bit PCM or 32-bit float)")
      ->required();
  cmd->add_option("--rates", o.rates, "Comma-separated sampling rates, e.g. 10000,20000");
  cmd->add_option("--conditions", o.conditions, "Comma-separated: quiet,5,10");
  cmd->add_option("--method", o.method, "proposed | drnl_baseline");
  cmd->add_option("--config", o.config, "Flat key=value config file");
  cmd->add_option("--noise-file", o.noise_file, "Babble recording to use instead of synthetic babble");
  cmd->add_option("--reference", o.reference, "Correlation reference: clean | noisy");
  cmd->add_option("--seed", o.seed, "Noise seed (default: $CIVB_SEED or 0)");
  cmd->add_option("--threads", o.threads, "Worker threads for matrix cells");
  cmd->add_option("--out-dir", o.out_dir, "Output directory");
}

civb::PipelineConfig BuildConfig(const Options& o) {
  civb::PipelineConfig cfg;
  if (const char* env = std::getenv("CIVB_SEED"); env && *env) {
    civb::ApplyConfigValue(cfg, "seed", env);
  }
  if (!o.config.empty()) civb::LoadConfigFile(cfg, o.config);
  if (!o.rates.empty()) civb::ApplyConfigValue(cfg, "rates", o.rates);
  if (!o.conditions.empty()) civb::ApplyConfigValue(cfg, "conditions", o.conditions);
  if (!o.method.empty()) civb::ApplyConfigValue(cfg, "method", o.method);
  if (!o.reference.empty()) civb::ApplyConfigValue(cfg, "reference", o.reference);
  if (!o.noise_file.empty()) {
    civb::ApplyConfigValue(cfg, "noise.kind", "file");
    civb::ApplyConfigValue(cfg, "noise.path", o.noise_file);
  }
  if (o.seed >= 0) civb::ApplyConfigValue(cfg, "seed", std::to_string(o.seed));
  if (o.threads > 0) cfg.threads = o.threads;
  cfg.noise.Validate();
  return cfg;
}

std::filesystem::path OutDir(const Options& o) {
  std::filesystem::path dir(o.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw civb::Error(civb::ErrorCode::kFileUnwritable,
                      "cannot create output directory '" + dir.string() + "'");
  }
  return dir;
}

std::string RateTag(double rate) {
  return std::to_string(static_cast<long long>(rate)) + "Hz";
}

int RunMatrixCommand(const Options& o) {
  civb::PipelineConfig cfg = BuildConfig(o);
  const civb::AudioBuffer clean = civb::LoadWav(o.input);
  const auto report =
      civb::RunMatrix(clean, cfg, {o.input, civb::HashFile(o.input)});
  const auto dir = OutDir(o);
  civb::EmitCsv(report, dir / "results.csv");
  std::ofstream(dir / "report.json") << civb::FormatJson(report);
  const auto plots = civb::EmitPlot(report, dir);
  std::cout << civb::FormatTables(report);
  std::cout << "wrote " << (dir / "results.csv").string() << ", "
            << (dir / "report.json").string();
  for (const auto& p : plots) std::cout << ", " << p.string();
  std::cout << "\n";
  return kExitOk;
}

int RunSingleCommand(const Options& o) {
  civb::PipelineConfig cfg = BuildConfig(o);
  const civb::AudioBuffer clean = civb::LoadWav(o.input);
  cfg.sample_rate_hz = cfg.rates.front();
  const civb::Condition condition = cfg.conditions.front();
  const auto row = civb::RunCondition(clean, cfg, condition);
  civb::ExperimentReport report;
  report.rows.push_back(row);
  report.config = civb::ConfigSnapshot(cfg);
  civb::EmitCsv(report, OutDir(o) / "run.csv");
  std::cout << civb::FormatCsv(report);
  return kExitOk;
}

// Shared by encode/resynth: the configured method on the first requested
// rate and condition.
civb::PipelineTrace TraceFor(const Options& o, civb::PipelineConfig& cfg) {
  const civb::AudioBuffer clean = civb::LoadWav(o.input);
  cfg = cfg.ResolvedFor(cfg.rates.front());
  const civb::AudioBuffer at_rate = civb::Resample(clean, cfg.sample_rate_hz);
  const civb::AudioBuffer input =
      civb::ConditionInput(at_rate, cfg, cfg.conditions.front());
  return civb::RunPipeline(input, cfg);
}

int RunEncodeCommand(const Options& o) {
  civb::PipelineConfig cfg = BuildConfig(o);
  const auto trace = TraceFor(o, cfg);
  const auto path = OutDir(o) / ("electrodogram_" + RateTag(cfg.sample_rate_hz) + ".csv");
  civb::EmitElectrodogramCsv(trace.gram, path);
  std::cout << "wrote " << trace.gram.TotalPulses() << " pulses on "
            << trace.gram.channels.size() << " channels to " << path.string() << "\n";
  return kExitOk;
}

int RunResynthCommand(const Options& o) {
  civb::PipelineConfig cfg = BuildConfig(o);
  const auto trace = TraceFor(o, cfg);
  const auto path = OutDir(o) / ("reconstruction_" + RateTag(cfg.sample_rate_hz) + ".wav");
  civb::SaveWav(civb::AudioBuffer(trace.reconstruction, cfg.sample_rate_hz), path);
  std::cout << "wrote " << path.string() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cochlear-implant speech coding simulation (Kalman + DRNL + SSB)"};
  app.require_subcommand(1);

  Options run_opts, matrix_opts, encode_opts, resynth_opts;
  auto* run = app.add_subcommand("run", "Run one method on one condition and rate");
  auto* matrix = app.add_subcommand("matrix", "Run both methods over all conditions and rates");
  auto* encode = app.add_subcommand("encode", "Write the electrodogram as CSV");
  auto* resynth = app.add_subcommand("resynth", "Write the reconstructed waveform as WAV");
  AddCommonFlags(run, run_opts);
  AddCommonFlags(matrix, matrix_opts);
  AddCommonFlags(encode, encode_opts);
  AddCommonFlags(resynth, resynth_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadArgs;
  }

  try {
    if (*run) return RunSingleCommand(run_opts);
    if (*matrix) return RunMatrixCommand(matrix_opts);
    if (*encode) return RunEncodeCommand(encode_opts);
    if (*resynth) return RunResynthCommand(resynth_opts);
  } catch (const civb::Error& e) {
    std::cerr << "civb: " << e.what() << "\n";
    return ExitCodeFor(e);
  } catch (const std::exception& e) {
    std::cerr << "civb: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitBadArgs;
}
