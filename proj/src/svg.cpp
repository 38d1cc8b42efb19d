// Copyright 2026 The pdnoise Authors.
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

#include "pdnoise/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace pdnoise::svg {
namespace {

std::string fmt(double v, int digits = 4) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Blue (0) through white (0.5) to red (1).
std::string ramp(double t) {
  t = std::clamp(std::isfinite(t) ? t : 0.0, 0.0, 1.0);
  int r, g, b;
  if (t < 0.5) {
    const double u = t / 0.5;
    r = static_cast<int>(std::lround(49 + u * (247 - 49)));
    g = static_cast<int>(std::lround(54 + u * (247 - 54)));
    b = static_cast<int>(std::lround(149 + u * (247 - 149)));
  } else {
    const double u = (t - 0.5) / 0.5;
    r = static_cast<int>(std::lround(247 + u * (165 - 247)));
    g = static_cast<int>(std::lround(247 + u * (0 - 247)));
    b = static_cast<int>(std::lround(247 + u * (38 - 247)));
  }
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

void open_svg(std::ostringstream& o, int w, int h, const std::string& title) {
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 " << w
    << ' ' << h << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
  o << "<text x=\"" << w / 2 << "\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">" << escape(title)
    << "</text>\n";
}

struct Frame {
  double x0, y0, w, h;       // plot area in pixels
  double lo_x, hi_x, lo_y, hi_y;
  double px(double x) const { return x0 + (hi_x > lo_x ? (x - lo_x) / (hi_x - lo_x) : 0.5) * w; }
  double py(double y) const { return y0 + h - (hi_y > lo_y ? (y - lo_y) / (hi_y - lo_y) : 0.5) * h; }
};

void axes(std::ostringstream& o, const Frame& f, const std::string& x_label, const std::string& y_label) {
  o << "<rect x=\"" << f.x0 << "\" y=\"" << f.y0 << "\" width=\"" << f.w << "\" height=\"" << f.h
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = f.lo_x + (f.hi_x - f.lo_x) * i / 4.0;
    const double yv = f.lo_y + (f.hi_y - f.lo_y) * i / 4.0;
    o << "<text x=\"" << f.px(xv) << "\" y=\"" << f.y0 + f.h + 16 << "\" text-anchor=\"middle\">" << fmt(xv, 3)
      << "</text>\n";
    o << "<text x=\"" << f.x0 - 6 << "\" y=\"" << f.py(yv) + 4 << "\" text-anchor=\"end\">" << fmt(yv, 3)
      << "</text>\n";
  }
  o << "<text x=\"" << f.x0 + f.w / 2 << "\" y=\"" << f.y0 + f.h + 34 << "\" text-anchor=\"middle\">"
    << escape(x_label) << "</text>\n";
  o << "<text transform=\"translate(14," << f.y0 + f.h / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
    << escape(y_label) << "</text>\n";
}

}  // namespace

std::string heatmap(const NoiseMap& map, const std::string& title, double lo, double hi, const std::string& unit) {
  const int cell = std::max(4, 480 / static_cast<int>(std::max<std::size_t>({map.m, map.n, 1})));
  const int w = static_cast<int>(map.m) * cell, h = static_cast<int>(map.n) * cell;
  std::ostringstream o;
  open_svg(o, w + 120, h + 40, title);
  for (std::size_t x = 0; x < map.m; ++x) {
    for (std::size_t y = 0; y < map.n; ++y) {
      const double t = hi > lo ? (map.at(x, y) - lo) / (hi - lo) : 0.5;
      o << "<rect x=\"" << 10 + static_cast<int>(x) * cell << "\" y=\"" << 30 + static_cast<int>(y) * cell
        << "\" width=\"" << cell << "\" height=\"" << cell << "\" fill=\"" << ramp(t) << "\"/>\n";
    }
  }
  // Color bar.
  const int bx = w + 30;
  for (int i = 0; i < 20; ++i) {
    o << "<rect x=\"" << bx << "\" y=\"" << 30 + (19 - i) * h / 20 << "\" width=\"16\" height=\"" << h / 20 + 1
      << "\" fill=\"" << ramp((i + 0.5) / 20.0) << "\"/>\n";
  }
  o << "<text x=\"" << bx + 20 << "\" y=\"" << 40 << "\">" << fmt(hi) << ' ' << escape(unit) << "</text>\n";
  o << "<text x=\"" << bx + 20 << "\" y=\"" << 30 + h << "\">" << fmt(lo) << ' ' << escape(unit) << "</text>\n";
  o << "</svg>\n";
  return o.str();
}

std::string histogram(std::span<const double> values, std::size_t bins, const std::string& title,
                      const std::string& x_label) {
  bins = std::max<std::size_t>(bins, 1);
  double lo = 0.0, hi = 0.0;
  if (!values.empty()) {
    lo = *std::min_element(values.begin(), values.end());
    hi = *std::max_element(values.begin(), values.end());
  }
  if (!(hi > lo)) hi = lo + 1.0;
  std::vector<std::size_t> counts(bins, 0);
  for (double v : values) {
    auto b = static_cast<std::size_t>((v - lo) / (hi - lo) * static_cast<double>(bins));
    ++counts[std::min(b, bins - 1)];
  }
  const double top = static_cast<double>(std::max<std::size_t>(1, *std::max_element(counts.begin(), counts.end())));
  const Frame f{70, 30, 460, 260, lo, hi, 0.0, top};
  std::ostringstream o;
  open_svg(o, 560, 340, title);
  for (std::size_t b = 0; b < bins; ++b) {
    const double x0 = f.px(lo + (hi - lo) * static_cast<double>(b) / static_cast<double>(bins));
    const double x1 = f.px(lo + (hi - lo) * static_cast<double>(b + 1) / static_cast<double>(bins));
    const double y = f.py(static_cast<double>(counts[b]));
    o << "<rect x=\"" << x0 << "\" y=\"" << y << "\" width=\"" << std::max(0.0, x1 - x0 - 1) << "\" height=\""
      << f.y0 + f.h - y << "\" fill=\"#4575b4\"/>\n";
  }
  axes(o, f, x_label, "tiles");
  o << "</svg>\n";
  return o.str();
}

std::string line_plot(std::span<const Series> series, const std::string& title, const std::string& x_label,
                      const std::string& y_label) {
  static const char* kColors[] = {"#d73027", "#4575b4", "#1a9850", "#984ea3"};
  double lo_x = INFINITY, hi_x = -INFINITY, lo_y = 0.0, hi_y = -INFINITY;
  for (const auto& s : series) {
    for (double x : s.x) lo_x = std::min(lo_x, x), hi_x = std::max(hi_x, x);
    for (double y : s.y) lo_y = std::min(lo_y, y), hi_y = std::max(hi_y, y);
  }
  if (!std::isfinite(lo_x)) lo_x = 0.0, hi_x = 1.0;
  if (!std::isfinite(hi_y) || !(hi_y > lo_y)) hi_y = lo_y + 1.0;
  const Frame f{70, 30, 460, 260, lo_x, hi_x, lo_y, hi_y * 1.05};
  std::ostringstream o;
  open_svg(o, 560, 340, title);
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kColors[k % 4];
    o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      o << f.px(s.x[i]) << ',' << f.py(s.y[i]) << ' ';
    }
    o << "\"/>\n";
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      o << "<circle cx=\"" << f.px(s.x[i]) << "\" cy=\"" << f.py(s.y[i]) << "\" r=\"3\" fill=\"" << color
        << "\"/>\n";
    }
    o << "<text x=\"" << f.x0 + 10 << "\" y=\"" << f.y0 + 16 + 14 * static_cast<int>(k) << "\" fill=\"" << color
      << "\">" << escape(s.name) << "</text>\n";
  }
  axes(o, f, x_label, y_label);
  o << "</svg>\n";
  return o.str();
}

}  // namespace pdnoise::svg
