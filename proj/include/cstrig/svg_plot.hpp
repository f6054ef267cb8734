#pragma once

// Deterministic SVG rendering of a multi-test grid: distance on the X axis,
// relative switching propensity on the Y axis, one line per
// (direction, mode) with solid strokes for precede and dashed for neighbor,
// and a black diamond on every point whose test is not significant.
// Undefined-RSP cells break the line. Output is byte-stable: fixed number
// formatting, no timestamps.

#include <cctype>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cstrig/format.hpp"
#include "cstrig/grid.hpp"

namespace cstrig {

struct PlotStyle {
  std::string color_l1_to_l2 = "#e3b505";  // yellow
  std::string color_l2_to_l1 = "#d62728";  // red
  std::string color_both = "#2ca02c";      // green
  bool log_y = false;
  double alpha = 0.05;
  int width = 860;
  int height = 420;

  const std::string& color(Direction d) const {
    switch (d) {
      case Direction::L1ToL2: return color_l1_to_l2;
      case Direction::L2ToL1: return color_l2_to_l1;
      default: return color_both;
    }
  }
};

namespace detail {

inline std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
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

inline double nice_step(double range, int target_ticks) {
  if (range <= 0) return 1.0;
  const double raw = range / target_ticks;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 2.5, 5.0, 10.0})
    if (raw <= m * mag) return m * mag;
  return 10.0 * mag;
}

inline std::string direction_label(Direction d, const LanguagePair& pair) {
  auto up = [](const std::string& s) {
    std::string o;
    for (char c : s) o += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return o;
  };
  switch (d) {
    case Direction::L1ToL2: return up(pair.l1) + "->" + up(pair.l2);
    case Direction::L2ToL1: return up(pair.l2) + "->" + up(pair.l1);
    default: return "both";
  }
}

}  // namespace detail

inline std::string render_multitest_svg(const GridResult& g, const PlotStyle& style = {}) {
  const double W = style.width, H = style.height;
  const double left = 64, right = W - 196, top = 34, bottom = H - 52;

  std::ostringstream svg;
  auto num = [](double v) { return fmt_fixed(v, 2); };
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"0 0 "
      << style.width << " " << style.height << "\" width=\"" << style.width
      << "\" height=\"" << style.height << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << style.width << "\" height=\""
      << style.height << "\" fill=\"white\"/>\n";

  const std::string title = g.corpus_label + " / " + to_string(g.spec.shared_type);
  svg << "<text x=\"" << num(left) << "\" y=\"20\" font-family=\"monospace\" "
         "font-size=\"14\">"
      << detail::xml_escape(title) << "</text>\n";

  // collect defined points
  double max_rsp = 0.0, min_rsp = std::numeric_limits<double>::infinity();
  bool any = false;
  for (const auto& cell : g.cells) {
    if (!cell.result.rsp) continue;
    const double v = *cell.result.rsp;
    if (style.log_y && v <= 0.0) continue;
    any = true;
    max_rsp = std::max(max_rsp, v);
    min_rsp = std::min(min_rsp, v);
  }

  // axes
  svg << "<line x1=\"" << num(left) << "\" y1=\"" << num(bottom) << "\" x2=\""
      << num(right) << "\" y2=\"" << num(bottom)
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  svg << "<line x1=\"" << num(left) << "\" y1=\"" << num(top) << "\" x2=\""
      << num(left) << "\" y2=\"" << num(bottom)
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n";

  const auto& dists = g.spec.distances;
  auto x_at = [&](std::size_t i) {
    if (dists.size() <= 1) return (left + right) / 2.0;
    return left + (right - left) * static_cast<double>(i) /
                      static_cast<double>(dists.size() - 1);
  };
  for (std::size_t i = 0; i < dists.size(); ++i) {
    const double x = x_at(i);
    svg << "<line x1=\"" << num(x) << "\" y1=\"" << num(bottom) << "\" x2=\""
        << num(x) << "\" y2=\"" << num(bottom + 5)
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"" << num(x) << "\" y=\"" << num(bottom + 20)
        << "\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\">"
        << dists[i] << "</text>\n";
  }
  svg << "<text x=\"" << num((left + right) / 2) << "\" y=\"" << num(H - 14)
      << "\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\">"
         "distance (tokens)</text>\n";
  svg << "<text x=\"16\" y=\"" << num((top + bottom) / 2)
      << "\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\" "
         "transform=\"rotate(-90 16 "
      << num((top + bottom) / 2) << ")\">relative switching propensity</text>\n";

  if (!any) {
    svg << "<text x=\"" << num((left + right) / 2) << "\" y=\""
        << num((top + bottom) / 2)
        << "\" font-family=\"monospace\" font-size=\"16\" text-anchor=\"middle\">"
           "no data</text>\n";
    svg << "</svg>\n";
    return svg.str();
  }

  // y scale
  double y_lo, y_hi;
  if (style.log_y) {
    y_lo = std::log10(min_rsp);
    y_hi = std::log10(max_rsp);
    if (y_hi - y_lo < 0.1) {
      y_lo -= 0.05;
      y_hi += 0.05;
    }
  } else {
    y_lo = 0.0;
    const double step = detail::nice_step(std::max(max_rsp, 1e-9), 5);
    y_hi = step * std::ceil(max_rsp / step + 0.25);
  }
  auto y_at = [&](double v) {
    const double t = style.log_y ? std::log10(v) : v;
    return bottom - (bottom - top) * (t - y_lo) / (y_hi - y_lo);
  };

  // y ticks
  const int n_ticks = 5;
  for (int i = 0; i <= n_ticks; ++i) {
    const double t = y_lo + (y_hi - y_lo) * i / n_ticks;
    const double value = style.log_y ? std::pow(10.0, t) : t;
    const double y = bottom - (bottom - top) * i / n_ticks;
    svg << "<line x1=\"" << num(left - 5) << "\" y1=\"" << num(y) << "\" x2=\""
        << num(left) << "\" y2=\"" << num(y)
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"" << num(left - 9) << "\" y=\"" << num(y + 4)
        << "\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"end\">"
        << fmt_fixed(value, 2) << "</text>\n";
  }

  // reference line at RSP = 1 when in range
  const double ref_t = style.log_y ? 0.0 : 1.0;
  if (ref_t >= y_lo && ref_t <= y_hi) {
    const double y = y_at(1.0);
    svg << "<line x1=\"" << num(left) << "\" y1=\"" << num(y) << "\" x2=\""
        << num(right) << "\" y2=\"" << num(y)
        << "\" stroke=\"#bbbbbb\" stroke-width=\"1\" stroke-dasharray=\"2,3\"/>\n";
  }

  struct Marker {
    double x, y;
    bool diamond;
    std::string color;
  };
  std::vector<Marker> markers;

  for (Direction d : g.spec.directions) {
    for (WindowMode m : g.spec.modes) {
      const std::string& color = style.color(d);
      const bool dashed = m == WindowMode::Neighbor;
      std::vector<std::pair<double, double>> segment;
      auto flush_segment = [&]() {
        if (segment.size() >= 2) {
          svg << "<polyline fill=\"none\" stroke=\"" << color
              << "\" stroke-width=\"2\"";
          if (dashed) svg << " stroke-dasharray=\"7,4\"";
          svg << " points=\"";
          for (std::size_t i = 0; i < segment.size(); ++i) {
            if (i) svg << ' ';
            svg << num(segment[i].first) << ',' << num(segment[i].second);
          }
          svg << "\"/>\n";
        }
        segment.clear();
      };
      for (std::size_t i = 0; i < dists.size(); ++i) {
        const GridCell* cell = g.find(d, m, dists[i]);
        const std::optional<double> rsp = cell ? cell->result.rsp : std::nullopt;
        if (!rsp || (style.log_y && *rsp <= 0.0)) {
          flush_segment();
          continue;
        }
        const double x = x_at(i), y = y_at(*rsp);
        segment.emplace_back(x, y);
        markers.push_back({x, y, cell->result.p_value >= style.alpha, color});
      }
      flush_segment();
    }
  }

  for (const auto& mk : markers)
    svg << "<circle cx=\"" << num(mk.x) << "\" cy=\"" << num(mk.y)
        << "\" r=\"2.5\" fill=\"" << mk.color << "\"/>\n";
  for (const auto& mk : markers) {
    if (!mk.diamond) continue;
    const double r = 5.5;
    svg << "<path fill=\"black\" d=\"M " << num(mk.x) << ' ' << num(mk.y - r)
        << " L " << num(mk.x + r) << ' ' << num(mk.y) << " L " << num(mk.x) << ' '
        << num(mk.y + r) << " L " << num(mk.x - r) << ' ' << num(mk.y)
        << " Z\"/>\n";
  }

  // legend
  double ly = top + 8;
  const double lx = right + 18;
  for (Direction d : g.spec.directions) {
    for (WindowMode m : g.spec.modes) {
      svg << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly) << "\" x2=\""
          << num(lx + 34) << "\" y2=\"" << num(ly) << "\" stroke=\""
          << style.color(d) << "\" stroke-width=\"2\"";
      if (m == WindowMode::Neighbor) svg << " stroke-dasharray=\"7,4\"";
      svg << "/>\n";
      svg << "<text x=\"" << num(lx + 42) << "\" y=\"" << num(ly + 4)
          << "\" font-family=\"monospace\" font-size=\"12\">"
          << detail::xml_escape(detail::direction_label(d, g.pair)) << ' '
          << to_string(m) << "</text>\n";
      ly += 20;
    }
  }
  ly += 6;
  const double dy = ly;
  svg << "<path fill=\"black\" d=\"M " << num(lx + 17) << ' ' << num(dy - 5.5)
      << " L " << num(lx + 22.5) << ' ' << num(dy) << " L " << num(lx + 17) << ' '
      << num(dy + 5.5) << " L " << num(lx + 11.5) << ' ' << num(dy) << " Z\"/>\n";
  svg << "<text x=\"" << num(lx + 42) << "\" y=\"" << num(dy + 4)
      << "\" font-family=\"monospace\" font-size=\"12\">p &gt;= "
      << fmt_shortest(style.alpha) << "</text>\n";

  svg << "</svg>\n";
  return svg.str();
}

}  // namespace cstrig
