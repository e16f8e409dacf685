// Copyright 2026 The cct Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CCT_SVG_HPP_
#define CCT_SVG_HPP_

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "cct/errors.hpp"
#include "cct/mc.hpp"

// Minimal static SVG charts for eyeballing reproductions. Fixed geometry,
// fixed palette, no styling knobs; output is a pure function of the report.

namespace cct {

namespace detail {

inline std::string fmt6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct SvgCanvas {
  std::ofstream out;
  double width = 640.0;
  double height = 420.0;
  double left = 64.0;
  double right = 24.0;
  double top = 24.0;
  double bottom = 48.0;

  explicit SvgCanvas(const std::string& path) : out(path) {
    if (!out) throw config_error("cannot open for writing: " + path);
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' '
        << height << "\">\n"
        << "<rect width=\"" << width << "\" height=\"" << height
        << "\" fill=\"white\"/>\n";
  }

  double plot_w() const { return width - left - right; }
  double plot_h() const { return height - top - bottom; }

  void line(double x1, double y1, double x2, double y2,
            const std::string& stroke, const std::string& extra = "") {
    out << "<line x1=\"" << fmt6(x1) << "\" y1=\"" << fmt6(y1) << "\" x2=\""
        << fmt6(x2) << "\" y2=\"" << fmt6(y2) << "\" stroke=\"" << stroke
        << "\"" << extra << "/>\n";
  }

  void rect(double x, double y, double w, double h, const std::string& fill,
            const std::string& stroke) {
    out << "<rect x=\"" << fmt6(x) << "\" y=\"" << fmt6(y) << "\" width=\""
        << fmt6(w) << "\" height=\"" << fmt6(h) << "\" fill=\"" << fill
        << "\" stroke=\"" << stroke << "\"/>\n";
  }

  void circle(double x, double y, double r, const std::string& fill) {
    out << "<circle cx=\"" << fmt6(x) << "\" cy=\"" << fmt6(y) << "\" r=\""
        << fmt6(r) << "\" fill=\"" << fill << "\"/>\n";
  }

  void text(double x, double y, const std::string& s,
            const std::string& anchor = "middle") {
    out << "<text x=\"" << fmt6(x) << "\" y=\"" << fmt6(y)
        << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\""
        << anchor << "\">" << s << "</text>\n";
  }

  void finish() {
    out << "</svg>\n";
    if (!out) throw config_error("SVG write failed");
  }
};

inline void y_axis(SvgCanvas* c, double ymin, double ymax,
                   const std::string& label) {
  c->line(c->left, c->top, c->left, c->top + c->plot_h(), "black");
  for (int t = 0; t <= 4; ++t) {
    double v = ymin + (ymax - ymin) * t / 4.0;
    double y = c->top + c->plot_h() * (1.0 - (v - ymin) / (ymax - ymin));
    c->line(c->left - 4, y, c->left, y, "black");
    c->text(c->left - 8, y + 4, fmt6(v), "end");
  }
  c->out << "<text x=\"14\" y=\"" << fmt6(c->top + c->plot_h() / 2)
         << "\" font-family=\"sans-serif\" font-size=\"12\" "
            "text-anchor=\"middle\" transform=\"rotate(-90 14 "
         << fmt6(c->top + c->plot_h() / 2) << ")\">" << label << "</text>\n";
}

inline const char* method_color(Method m) {
  switch (m) {
    case Method::CCT: return "#1f77b4";
    case Method::MinP: return "#ff7f0e";
    case Method::HC: return "#2ca02c";
    case Method::BJ: return "#d62728";
  }
  return "black";
}

}  // namespace detail

// Size study: one box per significance level. The box spans one binomial
// standard error around the size/alpha ratio, whiskers span two; the dashed
// line marks the nominal ratio 1.
inline void svg_size_boxplot(const std::string& path, const SizeReport& report) {
  detail::SvgCanvas c(path);
  double ymin = 1.0, ymax = 1.0;
  for (const SizeRow& r : report.rows) {
    ymin = std::min(ymin, r.ratio - 2.5 * r.mc_se);
    ymax = std::max(ymax, r.ratio + 2.5 * r.mc_se);
  }
  double pad = 0.05 * (ymax - ymin + 1e-12);
  ymin -= pad;
  ymax += pad;
  auto ypix = [&](double v) {
    return c.top + c.plot_h() * (1.0 - (v - ymin) / (ymax - ymin));
  };
  detail::y_axis(&c, ymin, ymax, "size / alpha");
  c.line(c.left, c.top + c.plot_h(), c.left + c.plot_w(), c.top + c.plot_h(),
         "black");
  c.line(c.left, ypix(1.0), c.left + c.plot_w(), ypix(1.0), "gray",
         " stroke-dasharray=\"4 3\"");
  std::size_t n = report.rows.size();
  for (std::size_t i = 0; i < n; ++i) {
    const SizeRow& r = report.rows[i];
    double cx = c.left + c.plot_w() * (i + 0.5) / static_cast<double>(n);
    double half_w = std::min(28.0, c.plot_w() / (3.0 * n));
    c.line(cx, ypix(r.ratio + 2.0 * r.mc_se), cx, ypix(r.ratio + r.mc_se),
           "black");
    c.line(cx, ypix(r.ratio - r.mc_se), cx, ypix(r.ratio - 2.0 * r.mc_se),
           "black");
    c.rect(cx - half_w, ypix(r.ratio + r.mc_se), 2 * half_w,
           ypix(r.ratio - r.mc_se) - ypix(r.ratio + r.mc_se), "#c6dbef",
           "black");
    c.line(cx - half_w, ypix(r.ratio), cx + half_w, ypix(r.ratio), "black");
    c.text(cx, c.height - c.bottom + 18, detail::fmt6(r.alpha));
  }
  c.text(c.left + c.plot_w() / 2, c.height - 10, "alpha");
  c.finish();
}

// Power comparison: one line per method against the grid variable.
inline void svg_power_lines(const std::string& path, const PowerReport& report,
                            const std::string& x_label) {
  detail::SvgCanvas c(path);
  std::vector<Method> methods;
  std::vector<double> xs;
  for (const PowerRow& r : report.rows) {
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) {
      methods.push_back(r.method);
    }
    if (std::find(xs.begin(), xs.end(), r.x) == xs.end()) xs.push_back(r.x);
  }
  double xmin = xs.front(), xmax = xs.front();
  for (double x : xs) {
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
  }
  if (xmax == xmin) xmax = xmin + 1.0;
  auto xpix = [&](double v) {
    return c.left + c.plot_w() * (v - xmin) / (xmax - xmin);
  };
  auto ypix = [&](double v) { return c.top + c.plot_h() * (1.0 - v); };
  detail::y_axis(&c, 0.0, 1.0, "power");
  c.line(c.left, c.top + c.plot_h(), c.left + c.plot_w(), c.top + c.plot_h(),
         "black");
  for (double x : xs) {
    c.line(xpix(x), c.top + c.plot_h(), xpix(x), c.top + c.plot_h() + 4,
           "black");
    c.text(xpix(x), c.height - c.bottom + 18, detail::fmt6(x));
  }
  c.text(c.left + c.plot_w() / 2, c.height - 10, x_label);
  for (std::size_t m = 0; m < methods.size(); ++m) {
    std::string color = detail::method_color(methods[m]);
    c.out << "<polyline fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1.5\" points=\"";
    for (const PowerRow& r : report.rows) {
      if (r.method == methods[m]) {
        c.out << detail::fmt6(xpix(r.x)) << ',' << detail::fmt6(ypix(r.power))
              << ' ';
      }
    }
    c.out << "\"/>\n";
    for (const PowerRow& r : report.rows) {
      if (r.method == methods[m]) c.circle(xpix(r.x), ypix(r.power), 2.5, color);
    }
    double ly = c.top + 16.0 * (m + 1);
    c.line(c.left + c.plot_w() - 70, ly - 4, c.left + c.plot_w() - 50, ly - 4,
           color);
    c.text(c.left + c.plot_w() - 46, ly, method_name(methods[m]), "start");
  }
  c.finish();
}

}  // namespace cct

#endif  // CCT_SVG_HPP_
