#pragma once

// Small standalone SVG 1.1 emitters for the report charts. No dependencies;
// each function returns a complete document.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "clagg/dataset.hpp"

namespace clagg::svg {

namespace detail {

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

inline const char* palette(int k) {
  static const char* colors[] = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2",
                                 "#59a14f", "#edc948", "#b07aa1", "#ff9da7",
                                 "#9c755f", "#bab0ac", "#1170aa", "#5fa2ce"};
  return colors[k % 12];
}

}  // namespace detail

// Vertical bar chart; `values` are fractions in [0,1] rendered as percents.
// An empty input produces a framed chart with an explicit annotation.
inline std::string bar_chart(const std::string& title,
                             const std::vector<std::string>& labels,
                             const std::vector<double>& values,
                             const std::string& empty_note = "no valid samples") {
  const int width = 920, height = 480;
  const int ml = 70, mr = 20, mt = 50, mb = 110;
  const int pw = width - ml - mr, ph = height - mt - mb;
  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
       std::to_string(width) + "\" height=\"" + std::to_string(height) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + std::to_string(width / 2) + "\" y=\"28\" font-size=\"18\" "
       "text-anchor=\"middle\" font-family=\"sans-serif\">" + title + "</text>\n";
  // axes
  s += "<line x1=\"" + std::to_string(ml) + "\" y1=\"" + std::to_string(mt) +
       "\" x2=\"" + std::to_string(ml) + "\" y2=\"" + std::to_string(mt + ph) +
       "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + std::to_string(ml) + "\" y1=\"" + std::to_string(mt + ph) +
       "\" x2=\"" + std::to_string(ml + pw) + "\" y2=\"" + std::to_string(mt + ph) +
       "\" stroke=\"black\"/>\n";

  if (values.empty()) {
    s += "<text x=\"" + std::to_string(ml + pw / 2) + "\" y=\"" +
         std::to_string(mt + ph / 2) + "\" font-size=\"16\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" fill=\"#888\">" + empty_note + "</text>\n";
    s += "</svg>\n";
    return s;
  }

  double vmax = 0.0;
  for (double v : values) vmax = std::max(vmax, v);
  if (vmax <= 0.0) vmax = 1.0;
  const double yscale = ph / (vmax * 1.1);
  for (int tick = 0; tick <= 5; ++tick) {
    const double v = vmax * 1.1 * tick / 5.0;
    const double y = mt + ph - v * yscale;
    s += "<line x1=\"" + std::to_string(ml - 4) + "\" y1=\"" + detail::fmt(y) +
         "\" x2=\"" + std::to_string(ml + pw) + "\" y2=\"" + detail::fmt(y) +
         "\" stroke=\"#ddd\"/>\n";
    s += "<text x=\"" + std::to_string(ml - 8) + "\" y=\"" + detail::fmt(y + 4) +
         "\" font-size=\"11\" text-anchor=\"end\" font-family=\"sans-serif\">" +
         detail::fmt(100.0 * v) + "%</text>\n";
  }
  const std::size_t n = values.size();
  const double slot = static_cast<double>(pw) / static_cast<double>(n);
  const double bw = std::max(2.0, slot * 0.7);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = ml + slot * (static_cast<double>(i) + 0.5);
    const double h = values[i] * yscale;
    s += "<rect x=\"" + detail::fmt(x - bw / 2) + "\" y=\"" +
         detail::fmt(mt + ph - h) + "\" width=\"" + detail::fmt(bw) +
         "\" height=\"" + detail::fmt(h) + "\" fill=\"#4e79a7\"/>\n";
    s += "<text font-size=\"11\" text-anchor=\"end\" font-family=\"monospace\" "
         "transform=\"translate(" + detail::fmt(x + 4) + "," +
         std::to_string(mt + ph + 8) + ") rotate(-60)\">" +
         (i < labels.size() ? labels[i] : "") + "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

// Dataset scatter colored by per-point class label; negative labels in gray.
inline std::string scatter(const std::string& title,
                           const std::vector<Point2D>& points,
                           const std::vector<int>& labels) {
  const int width = 640, height = 640;
  const int margin = 50;
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (!points.empty()) {
    xmin = xmax = points[0].x;
    ymin = ymax = points[0].y;
    for (const Point2D& p : points) {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
  }
  const double padx = std::max(1e-9, (xmax - xmin) * 0.05);
  const double pady = std::max(1e-9, (ymax - ymin) * 0.05);
  xmin -= padx; xmax += padx; ymin -= pady; ymax += pady;
  const double sx = (width - 2.0 * margin) / (xmax - xmin);
  const double sy = (height - 2.0 * margin) / (ymax - ymin);

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
       std::to_string(width) + "\" height=\"" + std::to_string(height) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + std::to_string(width / 2) + "\" y=\"28\" font-size=\"18\" "
       "text-anchor=\"middle\" font-family=\"sans-serif\">" + title + "</text>\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double x = margin + (points[i].x - xmin) * sx;
    const double y = height - margin - (points[i].y - ymin) * sy;
    const int l = i < labels.size() ? labels[i] : -1;
    const char* color = l < 0 ? "#c0c0c0" : detail::palette(l);
    s += "<circle cx=\"" + detail::fmt(x) + "\" cy=\"" + detail::fmt(y) +
         "\" r=\"3\" fill=\"" + color + "\" fill-opacity=\"0.8\"/>\n";
  }
  s += "</svg>\n";
  return s;
}

}  // namespace clagg::svg
