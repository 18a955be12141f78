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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
// followed by the measurements behind it; exits nonzero if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "civb/audio_buffer.h"
#include "civb/ci_encode.h"
#include "civb/drnl.h"
#include "civb/enhance.h"
#include "civb/metrics.h"
#include "civb/pipeline.h"
#include "civb/signal_io.h"
#include "test_signals.h"

namespace civb {
namespace {

using ::civb::testing::ArProcess;
using ::civb::testing::BinWidthHz;
using ::civb::testing::PeakBin;
using ::civb::testing::ReferencePearson;
using ::civb::testing::RmsOf;
using ::civb::testing::SnrDb;
using ::civb::testing::SpectralCentroidHz;
using ::civb::testing::SpeechLikeAr10;
using ::civb::testing::TailAmplitude;
using ::civb::testing::Tone;
using ::civb::testing::WhiteNoise;

const std::vector<std::string> kUtterances = {"arctic_a0007.wav", "arctic_a0009.wav"};
constexpr std::uint64_t kSeed = 20260101;

std::string UtterancePath(const std::string& name) {
  return std::string(CIVB_DATA_DIR) + "/speech/" + name;
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void Check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "    FAILED: " << what << "\n";
    }
  }
};

std::string Fmt(const char* fmt, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), fmt, a, b, c);
  return buf;
}

// 1. Improvement statistic reproduces the published percentages.
void ImprovementCriterion(Outcome& o) {
  struct Case {
    double rate, proposed, baseline, expected;
  };
  const Case cases[] = {{10000, 0.8026, 0.7888, 1.749},  {10000, 0.4713, 0.4377, 7.6},
                        {10000, 0.5475, 0.4768, 14.828}, {20000, 0.7940, 0.7658, 3.682},
                        {20000, 0.4609, 0.4136, 11.43},  {20000, 0.5375, 0.4562, 17.82}};
  for (const Case& c : cases) {
    const double got = ImprovementPercent(c.proposed, c.baseline);
    o.detail << Fmt("    %5.0f Hz  (%.4f, %.4f)", c.rate, c.proposed, c.baseline)
             << Fmt(" -> %.3f%% (expected %.3f)\n", got, c.expected);
    o.Check(std::abs(got - c.expected) <= 0.1, Fmt("%.4f/%.4f", c.proposed, c.baseline));
  }
}

// 2. Qualitative correlation pattern on the bundled utterances.
void PatternCriterion(Outcome& o) {
  for (const auto& name : kUtterances) {
    const auto start = std::chrono::steady_clock::now();
    const AudioBuffer clean = LoadWav(UtterancePath(name));
    PipelineConfig cfg;
    cfg.seed = kSeed;
    const ExperimentReport report = RunMatrix(clean, cfg);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.detail << "    " << name << Fmt(" (%.2f s audio, matrix %.1f s)\n", clean.duration_s(), secs);
    o.Check(secs <= 60.0, name + ": runtime over 60 s");
    for (double rate : cfg.rates) {
      auto r_of = [&](Condition c, Method m) {
        for (const auto& row : report.rows) {
          if (row.sample_rate_hz == rate && row.condition == c && row.method == m) return row.r;
        }
        return std::nan("");
      };
      const double pq = r_of(Condition::kQuiet, Method::kProposed);
      const double bq = r_of(Condition::kQuiet, Method::kDrnlBaseline);
      const double p5 = r_of(Condition::kBabble5dB, Method::kProposed);
      const double b5 = r_of(Condition::kBabble5dB, Method::kDrnlBaseline);
      const double p10 = r_of(Condition::kBabble10dB, Method::kProposed);
      const double b10 = r_of(Condition::kBabble10dB, Method::kDrnlBaseline);
      o.detail << Fmt("      %5.0f Hz  proposed quiet %.4f  5dB %.4f", rate, pq, p5)
               << Fmt("  10dB %.4f\n", p10);
      o.detail << Fmt("      %5.0f Hz  baseline quiet %.4f  5dB %.4f", rate, bq, b5)
               << Fmt("  10dB %.4f\n", b10);
      const std::string tag = name + Fmt(" @ %.0f Hz", rate);
      o.Check(p5 > b5, tag + ": (a) proposed > baseline at 5 dB");
      o.Check(p10 > b10, tag + ": (a) proposed > baseline at 10 dB");
      o.Check(pq > p5 && pq > p10, tag + ": (b) proposed quiet above both noisy conditions");
      o.Check(bq > b5 && bq > b10, tag + ": (b) baseline quiet above both noisy conditions");
      o.Check(pq >= 0.60 && pq <= 0.95,
              tag + Fmt(": (c) proposed quiet r %.4f outside [0.60, 0.95]", pq));
    }
  }
}

// 3. Correlation against a direct two-pass evaluation.
void PearsonCriterion(Outcome& o) {
  std::mt19937_64 rng(kSeed);
  std::uniform_int_distribution<int> len(2, 4000);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const auto n = static_cast<std::size_t>(len(rng));
    const double mix = u(rng), offset = 50.0 * u(rng), scale = std::pow(10.0, 3.0 * u(rng));
    auto x = WhiteNoise(n, 1.0, rng());
    auto y = WhiteNoise(n, 1.0, rng());
    for (std::size_t i = 0; i < n; ++i) y[i] = scale * (mix * x[i] + y[i]) + offset;
    worst = std::max(worst, std::abs(PearsonR(x, y) - ReferencePearson(x, y)));
  }
  o.detail << Fmt("    1000 random pairs, max |r - oracle| = %.3g\n", worst);
  o.Check(worst <= 1e-12, "deviation above 1e-12");
}

// 4. Charge balance and interleaving on a full-utterance encode.
void ElectrodogramCriterion(Outcome& o) {
  const AudioBuffer clean = LoadWav(UtterancePath(kUtterances[0]));
  for (double rate : {10000.0, 20000.0}) {
    const PipelineConfig cfg = PipelineConfig{}.ResolvedFor(rate);
    const PipelineTrace trace = RunPipeline(Resample(clean, rate), cfg);
    const Electrodogram& gram = trace.gram;
    std::vector<int> owner(static_cast<std::size_t>(gram.num_samples), -1);
    std::size_t overlaps = 0, unbalanced = 0;
    for (std::size_t k = 0; k < gram.channels.size(); ++k) {
      const auto wave = gram.RenderChannel(k);
      for (const auto& p : gram.channels[k].pulses) {
        double sum = 0.0;
        for (std::int64_t i = 0; i < gram.PulseWidth(); ++i) {
          const auto idx = static_cast<std::size_t>(p.onset_sample + i);
          sum += wave[idx];
          if (owner[idx] != -1) ++overlaps;
          owner[idx] = static_cast<int>(k);
        }
        if (sum != 0.0) ++unbalanced;
      }
    }
    o.detail << Fmt("    %5.0f Hz: %.0f pulses, %.0f unbalanced", rate,
                    static_cast<double>(gram.TotalPulses()), static_cast<double>(unbalanced))
             << Fmt(", %.0f overlapping samples\n", static_cast<double>(overlaps));
    o.Check(unbalanced == 0, Fmt("%.0f Hz charge imbalance", rate));
    o.Check(overlaps == 0, Fmt("%.0f Hz interleaving overlap", rate));
  }
}

// 5. DRNL small-signal homogeneity and high-level compression at CF.
void DrnlCriterion(Outcome& o) {
  double worst_homog = 0.0, worst_slope = 0.0;
  double c = 0.0;
  for (double rate : {10000.0, 20000.0}) {
    const Filterbank bank = MakeFilterbank(FilterbankLayout{}, rate);
    const auto n = static_cast<std::size_t>(0.5 * rate);
    for (const auto& ch : bank.channels) {
      const double cf = ch.center_frequency_hz;
      c = ch.c;
      const auto lo = DrnlChannel(Tone(cf, rate, n, 1e-9), ch, rate);
      const auto hi = DrnlChannel(Tone(cf, rate, n, 2e-9), ch, rate);
      std::vector<double> diff(lo.size());
      for (std::size_t i = 0; i < lo.size(); ++i) diff[i] = lo[i] - 0.5 * hi[i];
      worst_homog = std::max(worst_homog, RmsOf(diff) / RmsOf(lo));

      const double a1 = TailAmplitude(DrnlChannel(Tone(cf, rate, n, 1e-6), ch, rate));
      const double a2 = TailAmplitude(DrnlChannel(Tone(cf, rate, n, 2e-6), ch, rate));
      const double slope = std::log10(a2 / a1) / std::log10(2.0);
      worst_slope = std::max(worst_slope, slope);
    }
  }
  o.detail << Fmt("    homogeneity (1e-9 vs 2e-9): worst RMS error %.3g%%\n", 100.0 * worst_homog);
  o.detail << Fmt("    compression (1e-6 vs 2e-6): worst slope %.3f dB/dB (limit %.2f)\n",
                  worst_slope, c + 0.2);
  o.Check(worst_homog <= 0.01, "homogeneity error above 1%");
  o.Check(worst_slope <= c + 0.2, "compression slope above c + 0.2");
}

// 6. SSB frequency translation.
void SsbCriterion(Outcome& o) {
  const std::size_t n = 4096;
  for (double rate : {10000.0, 20000.0}) {
    for (double carrier : {500.0, 1000.0, 3000.0}) {
      const double centroid = SpectralCentroidHz(SsbDownshift(Tone(carrier, rate, n), carrier, rate), rate);
      const double bin = BinWidthHz(n, rate);
      const double peak =
          PeakBin(SsbDownshift(Tone(carrier + 100.0, rate, n), carrier, rate)) * bin;
      o.detail << Fmt("    %5.0f Hz carrier %4.0f: centroid", rate, carrier)
               << Fmt(" %.2f Hz, offset tone peak %.1f Hz (bin %.2f)\n", centroid, peak, bin);
      o.Check(centroid < 50.0, Fmt("centroid at carrier %.0f", carrier));
      o.Check(std::abs(peak - 100.0) <= bin, Fmt("offset peak at carrier %.0f", carrier));
    }
  }
}

// 7. Kalman enhancement on a synthetic AR(10) process.
void KalmanCriterion(Outcome& o) {
  const std::size_t n = 30000;
  const auto clean = ArProcess(SpeechLikeAr10(), n, kSeed);
  double power = 0.0;
  for (double v : clean) power += v * v;
  power /= n;
  const double noise_var = power / std::pow(10.0, 0.5);
  const auto w = WhiteNoise(n, std::sqrt(noise_var), kSeed + 1);
  std::vector<double> noisy(n);
  for (std::size_t i = 0; i < n; ++i) noisy[i] = clean[i] + w[i];
  KalmanConfig cfg;
  cfg.noise_variance_override = noise_var;
  const AudioBuffer out = KalmanEnhance(AudioBuffer(noisy, 10000.0), cfg);
  const double before = SnrDb(clean, noisy), after = SnrDb(clean, out.samples());
  o.detail << Fmt("    AR(10) + white noise: SNR %.2f dB -> %.2f dB (gain %.2f dB)\n", before,
                  after, after - before);
  o.Check(after - before >= 2.0, "SNR gain below 2 dB");

  cfg.noise_variance_override = 0.0;
  const AudioBuffer same = KalmanEnhance(AudioBuffer(clean, 10000.0), cfg);
  double dev = 0.0;
  for (std::size_t i = 0; i < n; ++i) dev = std::max(dev, std::abs(same.samples()[i] - clean[i]));
  o.detail << Fmt("    zero noise variance: max |out - in| = %.3g\n", dev);
  o.Check(dev <= 1e-6, "pass-through deviation above 1e-6");
}

// 8. Repeated matrix runs agree.
void DeterminismCriterion(Outcome& o) {
  const std::string path = UtterancePath(kUtterances[1]);
  const AudioBuffer clean = LoadWav(path);
  PipelineConfig cfg;
  cfg.seed = kSeed;
  const ExperimentReport a = RunMatrix(clean, cfg, {path, HashFile(path)});
  cfg.threads = 4;
  const ExperimentReport b = RunMatrix(clean, cfg, {path, HashFile(path)});
  double worst = 0.0;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    worst = std::max(worst, std::abs(a.rows[i].r - b.rows[i].r));
  }
  const bool same_csv = FormatCsv(a) == FormatCsv(b);
  o.detail << Fmt("    %.0f rows, max |dr| = %.3g, CSV identical: ", static_cast<double>(a.rows.size()), worst)
           << (same_csv ? "yes" : "no") << "\n";
  o.Check(a.rows.size() == b.rows.size() && worst <= 1e-9, "r differs between runs");
  o.Check(same_csv, "CSV differs between runs");
}

}  // namespace
}  // namespace civb

int main() {
  using Criterion = std::pair<const char*, std::function<void(civb::Outcome&)>>;
  const std::vector<Criterion> criteria = {
      {"improvement percent reproduces the six reference values within 0.1 pp",
       civb::ImprovementCriterion},
      {"bundled utterances: noise ordering, method ordering, quiet r in [0.60, 0.95], <= 60 s",
       civb::PatternCriterion},
      {"pearson r matches two-pass oracle on 1000 random pairs within 1e-12",
       civb::PearsonCriterion},
      {"full-utterance electrodogram is charge balanced and non-overlapping",
       civb::ElectrodogramCriterion},
      {"DRNL homogeneity within 1% and compression slope <= c + 0.2 dB/dB",
       civb::DrnlCriterion},
      {"SSB: tone at carrier -> centroid < 50 Hz; carrier + 100 Hz -> peak 100 Hz +/- 1 bin",
       civb::SsbCriterion},
      {"Kalman: >= 2 dB SNR gain on AR(10) at 5 dB; zero noise pass-through <= 1e-6",
       civb::KalmanCriterion},
      {"repeated matrix runs: r within 1e-9 and byte-identical CSV", civb::DeterminismCriterion},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [title, run] : criteria) {
    ++index;
    civb::Outcome outcome;
    try {
      run(outcome);
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail << "    exception: " << e.what() << "\n";
    }
    std::printf("[%s] criterion %d: %s\n", outcome.pass ? "PASS" : "FAIL", index, title);
    std::fputs(outcome.detail.str().c_str(), stdout);
    std::fflush(stdout);
    if (!outcome.pass) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", index - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
