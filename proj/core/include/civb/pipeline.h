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

// End-to-end speech-coding simulation and the quiet / babble experiment
// matrix built on top of it.
//
//   proposed:       Kalman -> preemphasis -> DRNL -> SSB -> envelope
//                   -> pulses -> tone vocoder
//   drnl_baseline:  the same chain without the Kalman stage

#ifndef CIVB_PIPELINE_H_
#define CIVB_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "civb/audio_buffer.h"
#include "civb/ci_encode.h"
#include "civb/drnl.h"
#include "civb/enhance.h"
#include "civb/metrics.h"
#include "civb/resynth.h"
#include "civb/signal_io.h"

namespace civb {

enum class Reference { kClean, kNoisy };

struct PipelineConfig {
  double sample_rate_hz = 10000.0;
  Method method = Method::kProposed;
  // ar_order == 0 picks the rate default (10 at 10 kHz, 16 at 20 kHz).
  KalmanConfig kalman = [] {
    KalmanConfig k;
    k.ar_order = 0;
    return k;
  }();
  double preemphasis_alpha = 0.97;
  FilterbankLayout layout;
  DrnlDefaults drnl;
  // pulses_per_second == 0 picks the fastest interleavable rate <= 900.
  EncoderConfig encoder = [] {
    EncoderConfig e;
    e.pulses_per_second = 0.0;
    return e;
  }();
  ResynthConfig resynth;
  double alignment_max_lag_ms = 20.0;
  NoiseSpec noise;
  std::uint64_t seed = 0;
  Reference reference = Reference::kClean;

  // Matrix extent.
  std::vector<double> rates{10000.0, 20000.0};
  std::vector<Condition> conditions{Condition::kQuiet, Condition::kBabble5dB,
                                    Condition::kBabble10dB};
  // Worker threads for matrix cells; results do not depend on it.
  int threads = 1;

  // Copy with rate-dependent defaults filled in for `rate_hz`.
  PipelineConfig ResolvedFor(double rate_hz) const;
};

// Flat key=value representation, keys mirroring the struct fields
// ("kalman.ar_order", "encoder.interleaved", ...).
std::vector<std::pair<std::string, std::string>> ConfigSnapshot(
    const PipelineConfig& cfg);
// Throws kInvalidArgument naming the key on unknown keys or bad values.
void ApplyConfigValue(PipelineConfig& cfg, const std::string& key,
                      const std::string& value);
// '#' starts a comment; blank lines are ignored.
void ApplyConfigText(PipelineConfig& cfg, const std::string& text);
void LoadConfigFile(PipelineConfig& cfg, const std::filesystem::path& path);

// Every intermediate of one pipeline run.
struct PipelineTrace {
  std::vector<double> enhanced;
  std::vector<double> preemphasized;
  Filterbank bank;
  std::vector<std::vector<double>> channels;
  std::vector<std::vector<double>> baseband;
  std::vector<std::vector<double>> envelopes;
  Electrodogram gram;
  std::vector<double> reconstruction;
};

// Runs `cfg.method` on `input` (already at the configured rate). Each stage
// output is checked for NaN/Inf; failures carry the stage name.
PipelineTrace RunPipeline(const AudioBuffer& input, const PipelineConfig& cfg);

// Noisy input for a condition: clean for quiet, clean + babble otherwise.
AudioBuffer ConditionInput(const AudioBuffer& clean, const PipelineConfig& cfg,
                           Condition condition);

MetricsRow RunCondition(const AudioBuffer& clean, const PipelineConfig& cfg,
                        Condition condition);

struct ImprovementRow {
  Condition condition = Condition::kQuiet;
  double sample_rate_hz = 0.0;
  double percent = 0.0;
};

struct InputIdentity {
  std::string path;
  std::string content_hash;  // FNV-1a 64, hex
};

struct ExperimentReport {
  std::vector<MetricsRow> rows;
  std::vector<ImprovementRow> improvements;
  std::vector<std::pair<std::string, std::string>> config;
  InputIdentity input;
};

std::string HashFile(const std::filesystem::path& path);

// {proposed, drnl_baseline} x cfg.conditions x cfg.rates. `clean` may be at
// any rate; it is resampled per requested rate.
ExperimentReport RunMatrix(const AudioBuffer& clean, const PipelineConfig& cfg,
                           InputIdentity input = {});

// Rows sorted by (rate, condition, method), then improvement rows with
// method=improvement_pct.
std::string FormatCsv(const ExperimentReport& report);
void EmitCsv(const ExperimentReport& report, const std::filesystem::path& path);

// One grouped-bar SVG per rate in `report`, written as
// <directory>/correlation_<rate>Hz.svg. Returns the files written.
std::string FormatPlotSvg(const ExperimentReport& report, double rate_hz);
std::vector<std::filesystem::path> EmitPlot(
    const ExperimentReport& report, const std::filesystem::path& directory);

std::string FormatJson(const ExperimentReport& report);
// Console tables: r per condition/method and improvement per condition.
std::string FormatTables(const ExperimentReport& report);

// Electrodogram as CSV: channel,onset_sample,amplitude.
void EmitElectrodogramCsv(const Electrodogram& gram,
                          const std::filesystem::path& path);

}  // namespace civb

#endif  // CIVB_PIPELINE_H_
