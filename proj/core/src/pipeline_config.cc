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
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>

#include "civb/error.h"
#include "civb/pipeline.h"

namespace civb {
namespace {

std::string FormatDouble(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void BadValue(const std::string& key, const std::string& value,
                           const std::string& expected) {
  Fail(ErrorCode::kInvalidArgument,
       "config key '" + key + "': cannot parse '" + value + "' as " + expected);
}

double ParseDouble(const std::string& key, const std::string& value) {
  const std::string v = Trim(value);
  char* end = nullptr;
  errno = 0;
  const double d = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || errno != 0 ||
      !std::isfinite(d)) {
    BadValue(key, value, "a number");
  }
  return d;
}

long long ParseInt(const std::string& key, const std::string& value) {
  const std::string v = Trim(value);
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) {
    BadValue(key, value, "an integer");
  }
  return out;
}

bool ParseBool(const std::string& key, const std::string& value) {
  const std::string v = Trim(value);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  BadValue(key, value, "a boolean");
}

std::vector<std::string> SplitList(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = Trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

using Setter = std::function<void(PipelineConfig&, const std::string&,
                                  const std::string&)>;

const std::map<std::string, Setter>& Setters() {
  static const std::map<std::string, Setter> setters = [] {
    std::map<std::string, Setter> m;
    auto dbl = [](double PipelineConfig::*field) {
      return [field](PipelineConfig& c, const std::string& k,
                     const std::string& v) { c.*field = ParseDouble(k, v); };
    };
    m["sample_rate_hz"] = dbl(&PipelineConfig::sample_rate_hz);
    m["preemphasis_alpha"] = dbl(&PipelineConfig::preemphasis_alpha);
    m["alignment_max_lag_ms"] = dbl(&PipelineConfig::alignment_max_lag_ms);
    m["method"] = [](PipelineConfig& c, const std::string& k,
                     const std::string& v) {
      const auto method = ParseMethod(Trim(v));
      if (!method) BadValue(k, v, "proposed|drnl_baseline");
      c.method = *method;
    };
    m["reference"] = [](PipelineConfig& c, const std::string& k,
                        const std::string& v) {
      const std::string t = Trim(v);
      if (t == "clean") {
        c.reference = Reference::kClean;
      } else if (t == "noisy") {
        c.reference = Reference::kNoisy;
      } else {
        BadValue(k, v, "clean|noisy");
      }
    };
    m["seed"] = [](PipelineConfig& c, const std::string& k,
                   const std::string& v) {
      const long long s = ParseInt(k, v);
      if (s < 0) BadValue(k, v, "a nonnegative integer");
      c.seed = static_cast<std::uint64_t>(s);
    };
    m["threads"] = [](PipelineConfig& c, const std::string& k,
                      const std::string& v) {
      c.threads = static_cast<int>(ParseInt(k, v));
    };
    m["rates"] = [](PipelineConfig& c, const std::string& k,
                    const std::string& v) {
      std::vector<double> rates;
      for (const auto& item : SplitList(v)) rates.push_back(ParseDouble(k, item));
      if (rates.empty()) BadValue(k, v, "a comma-separated list of rates");
      c.rates = rates;
    };
    m["conditions"] = [](PipelineConfig& c, const std::string& k,
                         const std::string& v) {
      std::vector<Condition> conds;
      for (const auto& item : SplitList(v)) {
        const auto cond = ParseCondition(item);
        if (!cond) BadValue(k, item, "quiet|5|10");
        conds.push_back(*cond);
      }
      if (conds.empty()) BadValue(k, v, "a comma-separated list of conditions");
      c.conditions = conds;
    };

    m["kalman.ar_order"] = [](PipelineConfig& c, const std::string& k,
                              const std::string& v) {
      c.kalman.ar_order = static_cast<int>(ParseInt(k, v));
    };
    m["kalman.frame_ms"] = [](PipelineConfig& c, const std::string& k,
                              const std::string& v) {
      c.kalman.frame_ms = ParseDouble(k, v);
    };
    m["kalman.iterations"] = [](PipelineConfig& c, const std::string& k,
                                const std::string& v) {
      c.kalman.iterations = static_cast<int>(ParseInt(k, v));
    };
    m["kalman.noise_estimate_ms"] = [](PipelineConfig& c, const std::string& k,
                                       const std::string& v) {
      c.kalman.noise_estimate_ms = ParseDouble(k, v);
    };
    m["kalman.noise_variance_override"] = [](PipelineConfig& c,
                                             const std::string& k,
                                             const std::string& v) {
      const std::string t = Trim(v);
      if (t.empty() || t == "none") {
        c.kalman.noise_variance_override.reset();
      } else {
        c.kalman.noise_variance_override = ParseDouble(k, t);
      }
    };

    m["layout.num_channels"] = [](PipelineConfig& c, const std::string& k,
                                  const std::string& v) {
      c.layout.num_channels = static_cast<int>(ParseInt(k, v));
    };
    m["layout.min_cf_hz"] = [](PipelineConfig& c, const std::string& k,
                               const std::string& v) {
      c.layout.min_cf_hz = ParseDouble(k, v);
    };
    m["layout.max_cf_hz"] = [](PipelineConfig& c, const std::string& k,
                               const std::string& v) {
      const std::string t = Trim(v);
      if (t == "auto") {
        c.layout.max_cf_hz.reset();
      } else {
        c.layout.max_cf_hz = ParseDouble(k, t);
      }
    };
    m["layout.spacing"] = [](PipelineConfig& c, const std::string& k,
                             const std::string& v) {
      const std::string t = Trim(v);
      if (t == "greenwood") {
        c.layout.spacing = ChannelSpacing::kGreenwood;
      } else if (t == "log") {
        c.layout.spacing = ChannelSpacing::kLog;
      } else {
        BadValue(k, v, "greenwood|log");
      }
    };

    auto drnl_dbl = [](double DrnlDefaults::*field) {
      return [field](PipelineConfig& c, const std::string& k,
                     const std::string& v) { c.drnl.*field = ParseDouble(k, v); };
    };
    auto drnl_int = [](int DrnlDefaults::*field) {
      return [field](PipelineConfig& c, const std::string& k,
                     const std::string& v) {
        c.drnl.*field = static_cast<int>(ParseInt(k, v));
      };
    };
    m["drnl.linear_gain"] = drnl_dbl(&DrnlDefaults::linear_gain);
    m["drnl.linear_gt_cascade"] = drnl_int(&DrnlDefaults::linear_gt_cascade);
    m["drnl.linear_lp_cascade"] = drnl_int(&DrnlDefaults::linear_lp_cascade);
    m["drnl.linear_bw_factor"] = drnl_dbl(&DrnlDefaults::linear_bw_factor);
    m["drnl.nonlinear_gt_cascade"] =
        drnl_int(&DrnlDefaults::nonlinear_gt_cascade);
    m["drnl.nonlinear_lp_cascade"] =
        drnl_int(&DrnlDefaults::nonlinear_lp_cascade);
    m["drnl.nonlinear_bw_factor"] = drnl_dbl(&DrnlDefaults::nonlinear_bw_factor);
    m["drnl.a"] = drnl_dbl(&DrnlDefaults::a);
    m["drnl.b"] = drnl_dbl(&DrnlDefaults::b);
    m["drnl.c"] = drnl_dbl(&DrnlDefaults::c);

    m["encoder.envelope_cutoff_hz"] = [](PipelineConfig& c, const std::string& k,
                                         const std::string& v) {
      c.encoder.envelope_cutoff_hz = ParseDouble(k, v);
    };
    m["encoder.envelope_lp_order"] = [](PipelineConfig& c, const std::string& k,
                                        const std::string& v) {
      c.encoder.envelope_lp_order = static_cast<int>(ParseInt(k, v));
    };
    m["encoder.pulses_per_second"] = [](PipelineConfig& c, const std::string& k,
                                        const std::string& v) {
      const std::string t = Trim(v);
      c.encoder.pulses_per_second = t == "auto" ? 0.0 : ParseDouble(k, t);
    };
    m["encoder.pulse_phase_samples"] = [](PipelineConfig& c,
                                          const std::string& k,
                                          const std::string& v) {
      c.encoder.pulse_phase_samples = static_cast<int>(ParseInt(k, v));
    };
    m["encoder.interleaved"] = [](PipelineConfig& c, const std::string& k,
                                  const std::string& v) {
      c.encoder.interleaved = ParseBool(k, v);
    };

    m["resynth.smoothing_cutoff_hz"] = [](PipelineConfig& c,
                                          const std::string& k,
                                          const std::string& v) {
      c.resynth.smoothing_cutoff_hz = ParseDouble(k, v);
    };
    m["resynth.smoothing_sections"] = [](PipelineConfig& c,
                                         const std::string& k,
                                         const std::string& v) {
      c.resynth.smoothing_sections = static_cast<int>(ParseInt(k, v));
    };
    m["resynth.peak_level"] = [](PipelineConfig& c, const std::string& k,
                                 const std::string& v) {
      c.resynth.peak_level = ParseDouble(k, v);
    };

    m["noise.kind"] = [](PipelineConfig& c, const std::string& k,
                         const std::string& v) {
      const std::string t = Trim(v);
      if (t == "synthetic_babble") {
        c.noise.kind = NoiseSpec::Kind::kSyntheticBabble;
      } else if (t == "file") {
        c.noise.kind = NoiseSpec::Kind::kFile;
      } else {
        BadValue(k, v, "synthetic_babble|file");
      }
    };
    m["noise.num_talkers"] = [](PipelineConfig& c, const std::string& k,
                                const std::string& v) {
      c.noise.num_talkers = static_cast<int>(ParseInt(k, v));
    };
    m["noise.path"] = [](PipelineConfig& c, const std::string&,
                         const std::string& v) {
      const std::string t = Trim(v);
      if (t.empty()) {
        c.noise.path.reset();
      } else {
        c.noise.path = t;
      }
    };
    return m;
  }();
  return setters;
}

}  // namespace

PipelineConfig PipelineConfig::ResolvedFor(double rate_hz) const {
  PipelineConfig out = *this;
  out.sample_rate_hz = rate_hz;
  if (out.kalman.ar_order == 0) {
    out.kalman.ar_order = KalmanConfig::ForRate(rate_hz).ar_order;
  }
  if (out.encoder.pulses_per_second == 0.0) {
    const double fastest = rate_hz / (2.0 * out.encoder.pulse_phase_samples *
                                      std::max(1, out.layout.num_channels));
    out.encoder.pulses_per_second =
        std::min(EncoderConfig{}.pulses_per_second, fastest);
  }
  out.noise.seed = seed;
  return out;
}

std::vector<std::pair<std::string, std::string>> ConfigSnapshot(
    const PipelineConfig& c) {
  std::vector<std::pair<std::string, std::string>> kv;
  auto add = [&](std::string k, std::string v) {
    kv.emplace_back(std::move(k), std::move(v));
  };
  std::string rates;
  for (double r : c.rates) rates += (rates.empty() ? "" : ",") + FormatDouble(r);
  std::string conds;
  for (Condition cond : c.conditions) {
    conds += (conds.empty() ? "" : ",") + std::string(ConditionName(cond));
  }
  add("sample_rate_hz", FormatDouble(c.sample_rate_hz));
  add("method", std::string(MethodName(c.method)));
  add("kalman.ar_order", std::to_string(c.kalman.ar_order));
  add("kalman.frame_ms", FormatDouble(c.kalman.frame_ms));
  add("kalman.iterations", std::to_string(c.kalman.iterations));
  add("kalman.noise_estimate_ms", FormatDouble(c.kalman.noise_estimate_ms));
  add("kalman.noise_variance_override",
      c.kalman.noise_variance_override
          ? FormatDouble(*c.kalman.noise_variance_override)
          : "none");
  add("preemphasis_alpha", FormatDouble(c.preemphasis_alpha));
  add("layout.num_channels", std::to_string(c.layout.num_channels));
  add("layout.min_cf_hz", FormatDouble(c.layout.min_cf_hz));
  add("layout.max_cf_hz",
      c.layout.max_cf_hz ? FormatDouble(*c.layout.max_cf_hz) : "auto");
  add("layout.spacing",
      c.layout.spacing == ChannelSpacing::kGreenwood ? "greenwood" : "log");
  add("drnl.linear_gain", FormatDouble(c.drnl.linear_gain));
  add("drnl.linear_gt_cascade", std::to_string(c.drnl.linear_gt_cascade));
  add("drnl.linear_lp_cascade", std::to_string(c.drnl.linear_lp_cascade));
  add("drnl.linear_bw_factor", FormatDouble(c.drnl.linear_bw_factor));
  add("drnl.nonlinear_gt_cascade", std::to_string(c.drnl.nonlinear_gt_cascade));
  add("drnl.nonlinear_lp_cascade", std::to_string(c.drnl.nonlinear_lp_cascade));
  add("drnl.nonlinear_bw_factor", FormatDouble(c.drnl.nonlinear_bw_factor));
  add("drnl.a", FormatDouble(c.drnl.a));
  add("drnl.b", FormatDouble(c.drnl.b));
  add("drnl.c", FormatDouble(c.drnl.c));
  add("encoder.envelope_cutoff_hz", FormatDouble(c.encoder.envelope_cutoff_hz));
  add("encoder.envelope_lp_order", std::to_string(c.encoder.envelope_lp_order));
  add("encoder.pulses_per_second",
      c.encoder.pulses_per_second == 0.0
          ? "auto"
          : FormatDouble(c.encoder.pulses_per_second));
  add("encoder.pulse_phase_samples",
      std::to_string(c.encoder.pulse_phase_samples));
  add("encoder.interleaved", c.encoder.interleaved ? "true" : "false");
  add("resynth.smoothing_cutoff_hz", FormatDouble(c.resynth.smoothing_cutoff_hz));
  add("resynth.smoothing_sections", std::to_string(c.resynth.smoothing_sections));
  add("resynth.peak_level", FormatDouble(c.resynth.peak_level));
  add("alignment_max_lag_ms", FormatDouble(c.alignment_max_lag_ms));
  add("noise.kind", c.noise.kind == NoiseSpec::Kind::kSyntheticBabble
                        ? "synthetic_babble"
                        : "file");
  add("noise.num_talkers", std::to_string(c.noise.num_talkers));
  add("noise.path", c.noise.path ? c.noise.path->string() : "");
  add("seed", std::to_string(c.seed));
  add("reference", c.reference == Reference::kClean ? "clean" : "noisy");
  add("rates", rates);
  add("conditions", conds);
  add("threads", std::to_string(c.threads));
  return kv;
}

void ApplyConfigValue(PipelineConfig& cfg, const std::string& key,
                      const std::string& value) {
  const auto& setters = Setters();
  const auto it = setters.find(Trim(key));
  if (it == setters.end()) {
    Fail(ErrorCode::kInvalidArgument, "unknown config key '" + key + "'");
  }
  it->second(cfg, it->first, value);
}

void ApplyConfigText(PipelineConfig& cfg, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      Fail(ErrorCode::kInvalidArgument,
           "config line " + std::to_string(line_no) + " has no '=': " + line);
    }
    ApplyConfigValue(cfg, line.substr(0, eq), line.substr(eq + 1));
  }
}

void LoadConfigFile(PipelineConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    Fail(ErrorCode::kFileUnreadable, "cannot open config '" + path.string() + "'");
  }
  std::stringstream ss;
  ss << in.rdbuf();
  ApplyConfigText(cfg, ss.str());
}

}  // namespace civb
