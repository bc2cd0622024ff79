// Copyright 2026 The orsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "orsim/experiment.hpp"

namespace orsim {

enum class ReportFormat { csv, markdown, svg };

inline std::optional<ReportFormat> report_format_from_string(std::string_view s) {
  if (s == "csv") return ReportFormat::csv;
  if (s == "markdown" || s == "md") return ReportFormat::markdown;
  if (s == "svg") return ReportFormat::svg;
  return std::nullopt;
}

namespace detail {

inline std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

inline std::string full(double v) { return fmt("%.17g", v); }
inline std::string pct(double v) { return fmt("%.2f", 100.0 * v) + "%"; }

inline void csv_arm(std::string& out, const char* prefix, const ArmSummary& a) {
  const std::string p(prefix);
  out += p + ".shots," + std::to_string(a.shots) + "\n";
  out += p + ".ones," + std::to_string(a.ones) + "\n";
  out += p + ".p1," + full(a.p1) + "\n";
  out += p + ".se," + full(a.se) + "\n";
  out += p + ".distance," + full(a.distance) + "\n";
}

}  // namespace detail

/// `field,value` rows; doubles at 17 significant digits so parsing round-trips exactly.
inline std::string report_to_csv(const AnalysisReport& r) {
  std::string out = "field,value\n";
  detail::csv_arm(out, "test", r.test);
  detail::csv_arm(out, "control", r.control);
  out += "difference," + detail::full(r.difference) + "\n";
  out += "se_difference," + detail::full(r.se_difference) + "\n";
  out += "z," + detail::full(r.z) + "\n";
  out += "p_value," + detail::full(r.p_value) + "\n";
  if (r.fit) {
    const auto& f = *r.fit;
    out += "fit.status," + std::string(to_string(f.status)) + "\n";
    out += "fit.delay_us," + detail::full(f.delay_us) + "\n";
    out += "fit.ratio," + detail::full(f.ratio) + "\n";
    out += "fit.ratio_err," + detail::full(f.ratio_err) + "\n";
    out += "fit.tau_us," + detail::full(f.tau_us) + "\n";
    out += "fit.tau_err_us," + detail::full(f.tau_err_us) + "\n";
    out += "fit.ci_low_us," + detail::full(f.ci_low_us) + "\n";
    out += "fit.ci_high_us," + detail::full(f.ci_high_us) + "\n";
  }
  return out;
}

inline AnalysisReport report_from_csv(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  if (line != "field,value") throw std::invalid_argument("report CSV: missing header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("report CSV: malformed row '" + line + "'");
    kv[line.substr(0, comma)] = line.substr(comma + 1);
  }
  auto get = [&](const std::string& k) -> const std::string& {
    const auto it = kv.find(k);
    if (it == kv.end()) throw std::invalid_argument("report CSV: missing field " + k);
    return it->second;
  };
  auto num = [&](const std::string& k) { return std::strtod(get(k).c_str(), nullptr); };
  auto whole = [&](const std::string& k) { return std::strtoull(get(k).c_str(), nullptr, 10); };
  auto arm = [&](const std::string& p, ArmRole role) {
    return ArmSummary{role, whole(p + ".shots"), whole(p + ".ones"), num(p + ".p1"), num(p + ".se"),
                      num(p + ".distance")};
  };
  AnalysisReport r;
  r.test = arm("test", ArmRole::test);
  r.control = arm("control", ArmRole::control);
  r.difference = num("difference");
  r.se_difference = num("se_difference");
  r.z = num("z");
  r.p_value = num("p_value");
  if (kv.contains("fit.status")) {
    TauFit f;
    const auto& s = get("fit.status");
    if (s == "ok") f.status = TauFit::Status::ok;
    else if (s == "no_signal") f.status = TauFit::Status::no_signal;
    else if (s == "complete_collapse") f.status = TauFit::Status::complete_collapse;
    else throw std::invalid_argument("report CSV: unknown fit status " + s);
    f.delay_us = num("fit.delay_us");
    f.ratio = num("fit.ratio");
    f.ratio_err = num("fit.ratio_err");
    f.tau_us = num("fit.tau_us");
    f.tau_err_us = num("fit.tau_err_us");
    f.ci_low_us = num("fit.ci_low_us");
    f.ci_high_us = num("fit.ci_high_us");
    r.fit = f;
  }
  return r;
}

inline std::string report_to_markdown(const AnalysisReport& r) {
  using detail::fmt;
  using detail::pct;
  std::string out = "# Arm comparison\n\n";
  out += "| Arm | Shots | P(0) | P(1) | Std. error | Distance from 50:50 |\n";
  out += "|---|---:|---:|---:|---:|---:|\n";
  for (const auto* a : {&r.test, &r.control}) {
    out += "| " + std::string(a == &r.test ? "Test" : "Control") + " | " + std::to_string(a->shots) + " | " +
           pct(1 - a->p1) + " | " + pct(a->p1) + " | " + pct(a->se) + " | " + pct(a->distance) + " |\n";
  }
  out += "\n";
  out += "- Difference in P(1), test minus control: " + pct(r.difference) + " ± " + pct(r.se_difference) + "\n";
  out += "- Significance: " + fmt("%.1f", std::abs(r.z)) + "σ (z = " + fmt("%.6g", r.z) + "), two-sided p = " +
         fmt("%.6g", r.p_value) + "\n";
  out += "- Distance from 50:50: test " + pct(r.test.distance) + ", control " + pct(r.control.distance) + "\n";
  if (r.fit) {
    const auto& f = *r.fit;
    if (f.status == TauFit::Status::ok) {
      out += "- Fitted collapse time: τ = " + fmt("%.6g", f.tau_us) + " μs ± " + fmt("%.6g", f.tau_err_us) +
             " μs (95% interval " + fmt("%.6g", f.ci_low_us) + " to " + fmt("%.6g", f.ci_high_us) + " μs)\n";
    } else {
      out += "- Fitted collapse time: " + std::string(to_string(f.status)) + "\n";
    }
  }
  return out;
}

/// Grouped bar chart of P(0)/P(1) per arm with ±1 standard-error whiskers.
inline std::string report_to_svg(const AnalysisReport& r) {
  using detail::fmt;
  constexpr double kWidth = 480, kHeight = 320, kLeft = 60, kBottom = 270, kTop = 30, kBar = 50;
  const double plot_h = kBottom - kTop;
  auto y_of = [&](double p) { return kBottom - p * plot_h; };
  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt("%.0f", kWidth) + "\" height=\"" +
         fmt("%.0f", kHeight) + "\" viewBox=\"0 0 " + fmt("%.0f", kWidth) + " " + fmt("%.0f", kHeight) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<line x1=\"" + fmt("%.2f", kLeft) + "\" y1=\"" + fmt("%.2f", kBottom) + "\" x2=\"" +
         fmt("%.2f", kWidth - 20) + "\" y2=\"" + fmt("%.2f", kBottom) + "\" stroke=\"black\"/>\n";
  out += "<line x1=\"" + fmt("%.2f", kLeft) + "\" y1=\"" + fmt("%.2f", kTop) + "\" x2=\"" + fmt("%.2f", kLeft) +
         "\" y2=\"" + fmt("%.2f", kBottom) + "\" stroke=\"black\"/>\n";
  for (double tick : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    out += "<text x=\"" + fmt("%.2f", kLeft - 8) + "\" y=\"" + fmt("%.2f", y_of(tick) + 4) +
           "\" font-size=\"11\" text-anchor=\"end\">" + fmt("%.2f", tick) + "</text>\n";
  }
  out += "<line x1=\"" + fmt("%.2f", kLeft) + "\" y1=\"" + fmt("%.2f", y_of(0.5)) + "\" x2=\"" +
         fmt("%.2f", kWidth - 20) + "\" y2=\"" + fmt("%.2f", y_of(0.5)) +
         "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
  const std::array<const ArmSummary*, 2> arms{&r.test, &r.control};
  const std::array<const char*, 2> colors{"#4472c4", "#ed7d31"};
  for (std::size_t g = 0; g < arms.size(); ++g) {
    const auto& a = *arms[g];
    const double group_x = kLeft + 40 + static_cast<double>(g) * 190;
    const std::array<double, 2> probs{1 - a.p1, a.p1};
    for (std::size_t k = 0; k < 2; ++k) {
      const double x = group_x + static_cast<double>(k) * (kBar + 10);
      const double y = y_of(probs[k]);
      out += "<rect x=\"" + fmt("%.2f", x) + "\" y=\"" + fmt("%.2f", y) + "\" width=\"" + fmt("%.2f", kBar) +
             "\" height=\"" + fmt("%.2f", kBottom - y) + "\" fill=\"" + colors[k] + "\"/>\n";
      const double cx = x + kBar / 2;
      const double lo = y_of(std::max(0.0, probs[k] - a.se));
      const double hi = y_of(std::min(1.0, probs[k] + a.se));
      out += "<line x1=\"" + fmt("%.2f", cx) + "\" y1=\"" + fmt("%.2f", lo) + "\" x2=\"" + fmt("%.2f", cx) +
             "\" y2=\"" + fmt("%.2f", hi) + "\" stroke=\"black\"/>\n";
      for (double yy : {lo, hi})
        out += "<line x1=\"" + fmt("%.2f", cx - 6) + "\" y1=\"" + fmt("%.2f", yy) + "\" x2=\"" + fmt("%.2f", cx + 6) +
               "\" y2=\"" + fmt("%.2f", yy) + "\" stroke=\"black\"/>\n";
      out += "<text x=\"" + fmt("%.2f", cx) + "\" y=\"" + fmt("%.2f", kBottom + 14) +
             "\" font-size=\"11\" text-anchor=\"middle\">|" + std::to_string(k) + "&#x27E9; " +
             fmt("%.2f", 100 * probs[k]) + "%</text>\n";
    }
    out += "<text x=\"" + fmt("%.2f", group_x + kBar + 5) + "\" y=\"" + fmt("%.2f", kBottom + 32) +
           "\" font-size=\"13\" text-anchor=\"middle\">" + (g == 0 ? "Test" : "Control") + "</text>\n";
  }
  out += "<text x=\"" + fmt("%.2f", kWidth / 2) + "\" y=\"18\" font-size=\"13\" text-anchor=\"middle\">" +
         "difference " + fmt("%.2f", 100 * r.difference) + "% ± " + fmt("%.2f", 100 * r.se_difference) +
         "%, z = " + fmt("%.2f", r.z) + "</text>\n";
  out += "</svg>\n";
  return out;
}

inline std::string emit_report(const AnalysisReport& r, ReportFormat format) {
  switch (format) {
    case ReportFormat::csv: return report_to_csv(r);
    case ReportFormat::markdown: return report_to_markdown(r);
    case ReportFormat::svg: return report_to_svg(r);
  }
  return {};
}

/// Writes the rendered report; throws std::runtime_error if the file cannot be written.
inline void write_report(const AnalysisReport& r, ReportFormat format, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write report to " + path);
  f << emit_report(r, format);
  if (!f) throw std::runtime_error("failed while writing report to " + path);
}

}  // namespace orsim
