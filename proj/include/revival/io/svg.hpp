#pragma once

// Dependency-free line plots. Output is decoration only; nothing numeric
// reads it back.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace revival::io {

struct PlotSeries {
  std::string label;
  std::string color;
  std::vector<std::optional<double>> y;
};

namespace detail {

inline std::string fmt(double v, const char* spec = "%.2f") {
  char buf[32];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

}  // namespace detail

inline void write_svg_plot(std::ostream& out, const std::vector<double>& x,
                           const std::vector<PlotSeries>& series, const std::string& x_label,
                           const std::string& y_label) {
  constexpr double W = 720, H = 440, L = 70, R = 170, T = 20, B = 50;
  const double pw = W - L - R, ph = H - T - B;

  double xmin = x.empty() ? 0.0 : *std::min_element(x.begin(), x.end());
  double xmax = x.empty() ? 1.0 : *std::max_element(x.begin(), x.end());
  double ymin = std::numeric_limits<double>::infinity();
  double ymax = -ymin;
  for (const auto& s : series) {
    for (const auto& v : s.y) {
      if (v && std::isfinite(*v)) {
        ymin = std::min(ymin, *v);
        ymax = std::max(ymax, *v);
      }
    }
  }
  if (!std::isfinite(ymin)) ymin = 0.0, ymax = 1.0;
  if (ymax - ymin < 1e-12) ymin -= 0.5, ymax += 0.5;
  if (xmax - xmin < 1e-12) xmax = xmin + 1.0;
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;

  auto px = [&](double v) { return L + (v - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double v) { return T + (ymax - v) / (ymax - ymin) * ph; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"#444\"/>\n";

  constexpr int kTicks = 5;
  for (int i = 0; i <= kTicks; ++i) {
    const double xv = xmin + (xmax - xmin) * i / kTicks;
    const double yv = ymin + (ymax - ymin) * i / kTicks;
    out << "<line x1=\"" << detail::fmt(px(xv)) << "\" y1=\"" << T + ph << "\" x2=\""
        << detail::fmt(px(xv)) << "\" y2=\"" << T + ph + 5 << "\" stroke=\"#444\"/>\n";
    out << "<text x=\"" << detail::fmt(px(xv)) << "\" y=\"" << T + ph + 18
        << "\" text-anchor=\"middle\">" << detail::fmt(xv, "%.3g") << "</text>\n";
    out << "<line x1=\"" << L - 5 << "\" y1=\"" << detail::fmt(py(yv)) << "\" x2=\"" << L
        << "\" y2=\"" << detail::fmt(py(yv)) << "\" stroke=\"#444\"/>\n";
    out << "<text x=\"" << L - 8 << "\" y=\"" << detail::fmt(py(yv) + 4)
        << "\" text-anchor=\"end\">" << detail::fmt(yv, "%.4g") << "</text>\n";
  }
  out << "<text x=\"" << L + pw / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\">"
      << x_label << "</text>\n";
  out << "<text x=\"16\" y=\"" << T + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << T + ph / 2 << ")\">" << y_label << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    std::string points;
    for (std::size_t i = 0; i < x.size() && i < s.y.size(); ++i) {
      if (!s.y[i] || !std::isfinite(*s.y[i])) continue;
      points += detail::fmt(px(x[i])) + "," + detail::fmt(py(*s.y[i])) + " ";
    }
    out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\""
        << points << "\"/>\n";
    const double ly = T + 15 + 18.0 * static_cast<double>(k);
    out << "<line x1=\"" << L + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << L + pw + 32
        << "\" y2=\"" << ly << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << L + pw + 38 << "\" y=\"" << ly + 4 << "\">" << s.label << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace revival::io
