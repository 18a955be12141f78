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
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "civb/error.h"
#include "civb/pipeline.h"
#include "json.hpp"

namespace civb {
namespace {

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string RateLabel(double rate) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.0f", rate);
  return buf;
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kFileUnwritable, "cannot open '" + path.string() + "'");
  out << text;
  if (!out) Fail(ErrorCode::kFileUnwritable, "write failed for '" + path.string() + "'");
}

std::vector<MetricsRow> SortedRows(const ExperimentReport& report) {
  std::vector<MetricsRow> rows = report.rows;
  std::stable_sort(rows.begin(), rows.end(), [](const MetricsRow& a, const MetricsRow& b) {
    return std::tie(a.sample_rate_hz, a.condition, a.method) <
           std::tie(b.sample_rate_hz, b.condition, b.method);
  });
  return rows;
}

std::vector<ImprovementRow> SortedImprovements(const ExperimentReport& report) {
  std::vector<ImprovementRow> rows = report.improvements;
  std::stable_sort(rows.begin(), rows.end(),
                   [](const ImprovementRow& a, const ImprovementRow& b) {
                     return std::tie(a.sample_rate_hz, a.condition) <
                            std::tie(b.sample_rate_hz, b.condition);
                   });
  return rows;
}

}  // namespace

std::string FormatCsv(const ExperimentReport& report) {
  std::string out = "condition,rate_hz,method,r,lag_samples\n";
  for (const auto& row : SortedRows(report)) {
    out += std::string(ConditionName(row.condition)) + "," +
           RateLabel(row.sample_rate_hz) + "," +
           std::string(MethodName(row.method)) + "," + Fixed(row.r, 9) + "," +
           std::to_string(row.alignment_lag_samples) + "\n";
  }
  for (const auto& imp : SortedImprovements(report)) {
    out += std::string(ConditionName(imp.condition)) + "," +
           RateLabel(imp.sample_rate_hz) + ",improvement_pct," +
           Fixed(imp.percent, 6) + ",\n";
  }
  return out;
}

void EmitCsv(const ExperimentReport& report, const std::filesystem::path& path) {
  WriteText(path, FormatCsv(report));
}

std::string FormatPlotSvg(const ExperimentReport& report, double rate_hz) {
  constexpr int kWidth = 640;
  constexpr int kHeight = 400;
  constexpr int kLeft = 60;
  constexpr int kRight = 150;
  constexpr int kTop = 40;
  constexpr int kBottom = 60;
  const int plot_w = kWidth - kLeft - kRight;
  const int plot_h = kHeight - kTop - kBottom;

  std::vector<MetricsRow> rows;
  for (const auto& row : SortedRows(report)) {
    if (row.sample_rate_hz == rate_hz) rows.push_back(row);
  }
  std::vector<Condition> conditions;
  for (const auto& row : rows) {
    if (std::find(conditions.begin(), conditions.end(), row.condition) ==
        conditions.end()) {
      conditions.push_back(row.condition);
    }
  }
  const char* colors[] = {"#1f77b4", "#ff7f0e"};

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-size=\"14\">Correlation coefficient by listening condition, Fs = "
      << RateLabel(rate_hz) << " Hz</text>\n";

  // y axis: r in [0, 1].
  svg << "<g class=\"y-axis\" data-min=\"0\" data-max=\"1\">\n";
  for (int tick = 0; tick <= 10; tick += 2) {
    const double v = tick / 10.0;
    const double y = kTop + plot_h * (1.0 - v);
    svg << "<line x1=\"" << kLeft - 4 << "\" y1=\"" << y << "\" x2=\""
        << kLeft + plot_w << "\" y2=\"" << y << "\" stroke=\"#ddd\"/>\n";
    svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << y + 4
        << "\" text-anchor=\"end\">" << Fixed(v, 1) << "</text>\n";
  }
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft
      << "\" y2=\"" << kTop + plot_h << "\" stroke=\"black\"/>\n";
  svg << "<text transform=\"translate(16," << kTop + plot_h / 2
      << ") rotate(-90)\" text-anchor=\"middle\">correlation r</text>\n";
  svg << "</g>\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\""
      << kLeft + plot_w << "\" y2=\"" << kTop + plot_h << "\" stroke=\"black\"/>\n";

  const double group_w =
      conditions.empty() ? plot_w : static_cast<double>(plot_w) / conditions.size();
  const double bar_w = group_w * 0.3;
  for (std::size_t g = 0; g < conditions.size(); ++g) {
    const double gx = kLeft + g * group_w;
    svg << "<text x=\"" << gx + group_w / 2 << "\" y=\"" << kTop + plot_h + 20
        << "\" text-anchor=\"middle\">" << ConditionName(conditions[g])
        << "</text>\n";
    for (const auto& row : rows) {
      if (row.condition != conditions[g]) continue;
      const int series = row.method == Method::kProposed ? 0 : 1;
      const double r = std::clamp(row.r, 0.0, 1.0);
      const double h = plot_h * r;
      const double x = gx + group_w * 0.2 + series * bar_w;
      svg << "<rect class=\"bar\" data-method=\"" << MethodName(row.method)
          << "\" data-condition=\"" << ConditionName(row.condition)
          << "\" data-r=\"" << Fixed(row.r, 6) << "\" x=\"" << x << "\" y=\""
          << kTop + plot_h - h << "\" width=\"" << bar_w << "\" height=\"" << h
          << "\" fill=\"" << colors[series] << "\"/>\n";
    }
  }
  // Legend.
  for (int s = 0; s < 2; ++s) {
    const int y = kTop + 10 + s * 20;
    svg << "<rect x=\"" << kLeft + plot_w + 16 << "\" y=\"" << y
        << "\" width=\"12\" height=\"12\" fill=\"" << colors[s] << "\"/>\n";
    svg << "<text x=\"" << kLeft + plot_w + 34 << "\" y=\"" << y + 10 << "\">"
        << (s == 0 ? "proposed" : "DRNL baseline") << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::vector<std::filesystem::path> EmitPlot(
    const ExperimentReport& report, const std::filesystem::path& directory) {
  std::vector<double> rates;
  for (const auto& row : SortedRows(report)) {
    if (std::find(rates.begin(), rates.end(), row.sample_rate_hz) == rates.end()) {
      rates.push_back(row.sample_rate_hz);
    }
  }
  std::vector<std::filesystem::path> written;
  for (double rate : rates) {
    const auto path = directory / ("correlation_" + RateLabel(rate) + "Hz.svg");
    WriteText(path, FormatPlotSvg(report, rate));
    written.push_back(path);
  }
  return written;
}

std::string FormatJson(const ExperimentReport& report) {
  nlohmann::ordered_json j;
  j["input"] = {{"path", report.input.path},
                {"content_hash_fnv1a64", report.input.content_hash}};
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.config) config[k] = v;
  j["config"] = config;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : SortedRows(report)) {
    j["rows"].push_back({{"condition", ConditionName(row.condition)},
                         {"rate_hz", row.sample_rate_hz},
                         {"method", MethodName(row.method)},
                         {"r", row.r},
                         {"lag_samples", row.alignment_lag_samples}});
  }
  j["improvements"] = nlohmann::ordered_json::array();
  for (const auto& imp : SortedImprovements(report)) {
    j["improvements"].push_back({{"condition", ConditionName(imp.condition)},
                                 {"rate_hz", imp.sample_rate_hz},
                                 {"percent", imp.percent}});
  }
  return j.dump(2) + "\n";
}

std::string FormatTables(const ExperimentReport& report) {
  std::ostringstream out;
  std::map<double, std::vector<MetricsRow>> by_rate;
  for (const auto& row : SortedRows(report)) by_rate[row.sample_rate_hz].push_back(row);
  for (const auto& [rate, rows] : by_rate) {
    out << "Correlation coefficient, Fs = " << RateLabel(rate) << " Hz\n";
    out << "  condition      proposed   drnl_baseline   improvement(%)\n";
    std::vector<Condition> seen;
    for (const auto& row : rows) {
      if (std::find(seen.begin(), seen.end(), row.condition) != seen.end()) continue;
      seen.push_back(row.condition);
      double p = 0.0;
      double b = 0.0;
      for (const auto& r2 : rows) {
        if (r2.condition != row.condition) continue;
        (r2.method == Method::kProposed ? p : b) = r2.r;
      }
      double imp = 0.0;
      for (const auto& i : report.improvements) {
        if (i.sample_rate_hz == rate && i.condition == row.condition) imp = i.percent;
      }
      char line[128];
      std::snprintf(line, sizeof line, "  %-12s %9.4f %15.4f %16.3f\n",
                    std::string(ConditionName(row.condition)).c_str(), p, b, imp);
      out << line;
    }
    out << "\n";
  }
  return out.str();
}

void EmitElectrodogramCsv(const Electrodogram& gram,
                          const std::filesystem::path& path) {
  std::string out = "channel,onset_sample,amplitude\n";
  for (std::size_t k = 0; k < gram.channels.size(); ++k) {
    for (const Pulse& p : gram.channels[k].pulses) {
      out += std::to_string(k) + "," + std::to_string(p.onset_sample) + "," +
             Fixed(p.amplitude, 9) + "\n";
    }
  }
  WriteText(path, out);
}

}  // namespace civb
