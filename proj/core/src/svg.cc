// Copyright 2026 The MCM Toolkit Authors.
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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "mcm/report.h"

namespace mcm {
namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 520.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 30.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo;
  double hi;
};

Range padded(double lo, double hi) {
  if (!(hi > lo)) {
    lo -= 1.0;
    hi += 1.0;
  }
  const double pad = (hi - lo) * 0.05;
  return {lo - pad, hi + pad};
}

std::string header(const std::string& title) {
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) +
                  "\" height=\"" + num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) + " " +
                  num(kHeight) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + num(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" +
       escape(title) + "</text>\n";
  return s;
}

}  // namespace

std::string scatter_svg(const std::vector<ScatterPoint>& points, const ScatterOptions& options) {
  double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;
  if (!points.empty()) {
    xmin = xmax = points.front().x;
    ymin = ymax = points.front().y;
    for (const auto& p : points) {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
  }
  const Range xr = padded(xmin, xmax);
  const Range yr = padded(ymin, ymax);
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  const auto sx = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  const auto sy = [&](double y) { return kTop + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph; };

  std::string s = header(options.title);
  s += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(pw) +
       "\" height=\"" + num(ph) + "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = xr.lo + (xr.hi - xr.lo) * i / 4.0;
    const double yv = yr.lo + (yr.hi - yr.lo) * i / 4.0;
    s += "<text x=\"" + num(sx(xv)) + "\" y=\"" + num(kTop + ph + 16) +
         "\" text-anchor=\"middle\">" + tick(xv) + "</text>\n";
    s += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(sy(yv) + 4) +
         "\" text-anchor=\"end\">" + tick(yv) + "</text>\n";
  }
  s += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"" + num(kHeight - 16) +
       "\" text-anchor=\"middle\">" + escape(options.x_label) + "</text>\n";
  s += "<text x=\"16\" y=\"" + num(kTop + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
       num(kTop + ph / 2) + ")\">" + escape(options.y_label) + "</text>\n";

  if (options.fit_line && points.size() >= 2) {
    double mx = 0.0, my = 0.0;
    for (const auto& p : points) {
      mx += p.x;
      my += p.y;
    }
    mx /= static_cast<double>(points.size());
    my /= static_cast<double>(points.size());
    double sxy = 0.0, sxx = 0.0;
    for (const auto& p : points) {
      sxy += (p.x - mx) * (p.y - my);
      sxx += (p.x - mx) * (p.x - mx);
    }
    if (sxx > 0.0) {
      const double slope = sxy / sxx;
      const double y0 = my + slope * (xmin - mx);
      const double y1 = my + slope * (xmax - mx);
      s += "<line x1=\"" + num(sx(xmin)) + "\" y1=\"" + num(sy(y0)) + "\" x2=\"" + num(sx(xmax)) +
           "\" y2=\"" + num(sy(y1)) + "\" stroke=\"#1f4e9c\" stroke-width=\"1.5\"/>\n";
    }
  }

  for (const auto& p : points) {
    const char* color = kPalette[static_cast<std::size_t>(std::max(0, p.group)) % 5];
    s += "<circle cx=\"" + num(sx(p.x)) + "\" cy=\"" + num(sy(p.y)) + "\" r=\"3.5\" fill=\"" +
         color + "\" fill-opacity=\"0.8\"><title>" + escape(p.label) + "</title></circle>\n";
    if (options.label_points) {
      s += "<text x=\"" + num(sx(p.x) + 5) + "\" y=\"" + num(sy(p.y) - 4) +
           "\" font-size=\"9\">" + escape(p.label) + "</text>\n";
    }
  }
  for (std::size_t g = 0; g < options.group_names.size(); ++g) {
    const double y = kTop + 14 + 16 * static_cast<double>(g);
    s += "<circle cx=\"" + num(kLeft + 14) + "\" cy=\"" + num(y - 4) + "\" r=\"4\" fill=\"" +
         kPalette[g % 5] + "\"/>\n";
    s += "<text x=\"" + num(kLeft + 24) + "\" y=\"" + num(y) + "\">" +
         escape(options.group_names[g]) + "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

std::string bar_svg(const std::vector<double>& values, const std::string& title) {
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  double vmax = 0.0;
  for (double v : values) vmax = std::max(vmax, v);
  if (vmax <= 0.0) vmax = 1.0;
  std::string s = header(title);
  s += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop + ph) + "\" x2=\"" + num(kLeft + pw) +
       "\" y2=\"" + num(kTop + ph) + "\" stroke=\"#444\"/>\n";
  const double slot = values.empty() ? pw : pw / static_cast<double>(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double h = values[i] / vmax * ph;
    s += "<rect x=\"" + num(kLeft + slot * static_cast<double>(i) + slot * 0.1) + "\" y=\"" +
         num(kTop + ph - h) + "\" width=\"" + num(slot * 0.8) + "\" height=\"" + num(h) +
         "\" fill=\"#1f77b4\"><title>PC" + std::to_string(i + 1) + ": " + tick(values[i]) +
         "</title></rect>\n";
  }
  s += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"" + num(kHeight - 16) +
       "\" text-anchor=\"middle\">principal component</text>\n";
  s += "</svg>\n";
  return s;
}

}  // namespace mcm
