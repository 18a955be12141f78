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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <string>
#include <tuple>

#include "civb/error.h"
#include "civb/pipeline.h"

namespace civb {
namespace {

// Runs `fn` and tags any library error it throws with `stage`.
template <typename Fn>
auto RunStage(const char* stage, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    if (!e.stage().empty()) throw;
    throw e.WithStage(stage);
  }
}

void CheckStage(const char* stage, std::span<const double> values) {
  try {
    RequireFinite(values, stage);
  } catch (const Error& e) {
    throw e.WithStage(stage);
  }
}

}  // namespace

PipelineTrace RunPipeline(const AudioBuffer& input, const PipelineConfig& cfg) {
  const double rate = input.sample_rate_hz();
  if (rate != cfg.sample_rate_hz) {
    Fail(ErrorCode::kInvalidArgument,
         "input is at " + std::to_string(rate) + " Hz but the pipeline is configured for " +
             std::to_string(cfg.sample_rate_hz) + " Hz");
  }
  PipelineTrace t;

  if (cfg.method == Method::kProposed) {
    t.enhanced = RunStage("kalman", [&] {
      return std::move(KalmanEnhance(input, cfg.kalman)).release();
    });
  } else {
    t.enhanced.assign(input.samples().begin(), input.samples().end());
  }
  CheckStage("kalman", t.enhanced);

  t.preemphasized = RunStage("preemphasis", [&] {
    return std::move(
               Preemphasize(AudioBuffer(t.enhanced, rate), cfg.preemphasis_alpha))
        .release();
  });
  CheckStage("preemphasis", t.preemphasized);

  t.bank = RunStage("drnl", [&] { return MakeFilterbank(cfg.layout, rate, cfg.drnl); });
  t.channels = RunStage("drnl", [&] {
    return Analyze(AudioBuffer(t.preemphasized, rate), t.bank);
  });
  for (const auto& ch : t.channels) CheckStage("drnl", ch);

  const auto cfs = t.bank.CenterFrequencies();
  t.baseband.resize(t.channels.size());
  t.envelopes.resize(t.channels.size());
  for (std::size_t k = 0; k < t.channels.size(); ++k) {
    t.baseband[k] = RunStage("ssb", [&] {
      return SsbDownshift(t.channels[k], cfs[k], rate);
    });
    CheckStage("ssb", t.baseband[k]);
    t.envelopes[k] = RunStage("envelope", [&] {
      return EnvelopeDetect(t.baseband[k], cfg.encoder, rate);
    });
    CheckStage("envelope", t.envelopes[k]);
  }

  t.gram = RunStage("pulses", [&] {
    return PulseEncode(t.envelopes, cfg.encoder, cfs, rate);
  });

  t.reconstruction = RunStage("resynth", [&] {
    return std::move(Synthesize(t.gram, cfg.resynth)).release();
  });
  CheckStage("resynth", t.reconstruction);
  return t;
}

AudioBuffer ConditionInput(const AudioBuffer& clean, const PipelineConfig& cfg,
                           Condition condition) {
  const auto snr = ConditionSnrDb(condition);
  if (!snr) return clean;
  return RunStage("noise", [&] {
    NoiseSpec spec = cfg.noise;
    spec.seed = cfg.seed;
    const AudioBuffer noise =
        MakeNoise(spec, clean.size(), clean.sample_rate_hz());
    return MixAtSnr(clean, noise, *snr);
  });
}

MetricsRow RunCondition(const AudioBuffer& clean_in, const PipelineConfig& base,
                        Condition condition) {
  const PipelineConfig cfg = base.ResolvedFor(base.sample_rate_hz);
  const AudioBuffer clean =
      clean_in.sample_rate_hz() == cfg.sample_rate_hz
          ? clean_in
          : RunStage("resample", [&] { return Resample(clean_in, cfg.sample_rate_hz); });
  const AudioBuffer input = ConditionInput(clean, cfg, condition);
  const PipelineTrace trace = RunPipeline(input, cfg);

  const AudioBuffer& reference = cfg.reference == Reference::kClean ? clean : input;
  const auto max_lag = static_cast<std::int64_t>(
      std::lround(cfg.alignment_max_lag_ms * cfg.sample_rate_hz / 1000.0));
  const Alignment aligned = RunStage("metrics", [&] {
    return Align(reference.samples(), trace.reconstruction, max_lag);
  });

  MetricsRow row;
  row.condition = condition;
  row.sample_rate_hz = cfg.sample_rate_hz;
  row.method = cfg.method;
  row.r = RunStage("metrics", [&] { return PearsonR(aligned.reference, aligned.test); });
  row.alignment_lag_samples = aligned.lag;
  return row;
}

std::string HashFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kFileUnreadable, "cannot open '" + path.string() + "'");
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[4096];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

ExperimentReport RunMatrix(const AudioBuffer& clean, const PipelineConfig& cfg,
                           InputIdentity input) {
  struct Cell {
    double rate;
    Condition condition;
    Method method;
  };
  std::vector<double> rates = cfg.rates;
  std::sort(rates.begin(), rates.end());
  rates.erase(std::unique(rates.begin(), rates.end()), rates.end());
  std::vector<Condition> conditions = cfg.conditions;
  std::sort(conditions.begin(), conditions.end());
  conditions.erase(std::unique(conditions.begin(), conditions.end()),
                   conditions.end());

  std::vector<AudioBuffer> resampled;
  for (double rate : rates) {
    resampled.push_back(RunStage("resample", [&] { return Resample(clean, rate); }));
  }

  std::vector<Cell> cells;
  for (double rate : rates) {
    for (Condition c : conditions) {
      for (Method m : {Method::kProposed, Method::kDrnlBaseline}) {
        cells.push_back({rate, c, m});
      }
    }
  }

  auto run_cell = [&](std::size_t i) {
    const Cell& cell = cells[i];
    const auto rate_index = static_cast<std::size_t>(
        std::find(rates.begin(), rates.end(), cell.rate) - rates.begin());
    PipelineConfig cell_cfg = cfg;
    cell_cfg.sample_rate_hz = cell.rate;
    cell_cfg.method = cell.method;
    return RunCondition(resampled[rate_index], cell_cfg, cell.condition);
  };

  ExperimentReport report;
  report.rows.resize(cells.size());
  if (cfg.threads <= 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) report.rows[i] = run_cell(i);
  } else {
    // Fixed-size worker pool; each cell writes only its own slot.
    std::atomic<std::size_t> next{0};
    std::vector<std::future<void>> workers;
    for (int w = 0; w < cfg.threads; ++w) {
      workers.push_back(std::async(std::launch::async, [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
          report.rows[i] = run_cell(i);
        }
      }));
    }
    for (auto& w : workers) w.get();
  }

  for (double rate : rates) {
    for (Condition c : conditions) {
      double proposed = 0.0;
      double baseline = 0.0;
      for (const auto& row : report.rows) {
        if (row.sample_rate_hz != rate || row.condition != c) continue;
        (row.method == Method::kProposed ? proposed : baseline) = row.r;
      }
      report.improvements.push_back({c, rate, ImprovementPercent(proposed, baseline)});
    }
  }
  report.config = ConfigSnapshot(cfg);
  report.input = std::move(input);
  return report;
}

}  // namespace civb
