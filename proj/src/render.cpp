#include "wcoh/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

#include "wcoh/errors.hpp"

namespace wcoh {

namespace {

struct Rgb {
  double r = 0, g = 0, b = 0;
};

Rgb palette_color(const std::string& name, double v) {
  v = std::clamp(v, 0.0, 1.0);
  if (name == "gray") return {v, v, v};
  // "hot": black -> red -> yellow -> white, monotone in luminance
  return {std::clamp(3.0 * v, 0.0, 1.0), std::clamp(3.0 * v - 1.0, 0.0, 1.0),
          std::clamp(3.0 * v - 2.0, 0.0, 1.0)};
}

Rgb pale(Rgb c) {
  const double f = 0.65;  // blend toward white outside the COI
  return {c.r + (1.0 - c.r) * f, c.g + (1.0 - c.g) * f, c.b + (1.0 - c.b) * f};
}

std::string hex_color(Rgb c) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(std::lround(c.r * 255.0)),
                static_cast<int>(std::lround(c.g * 255.0)),
                static_cast<int>(std::lround(c.b * 255.0)));
  return buf;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

// Shared plot geometry for both backends.
struct Layout {
  double x0, y0, w, h;       // plot rectangle
  std::size_t rows, cols;
  double cw, ch;             // cell size in pixels

  Layout(const CoherenceMap& map, const RenderOptions& opts) {
    const double left = 64, right = 86, top = 30, bottom = 46;
    x0 = left;
    y0 = top;
    w = static_cast<double>(opts.width) - left - right;
    h = static_cast<double>(opts.height) - top - bottom;
    rows = map.rows();
    cols = map.cols();
    cw = w / static_cast<double>(cols);
    ch = h / static_cast<double>(rows);
  }

  double cell_x(double t) const { return x0 + t * cw; }
  double cell_y(double j) const { return y0 + j * ch; }
};

double value_scale_max(const CoherenceMap& map) {
  if (map.kind != MapKind::xwt_power) return 1.0;
  double m = 0.0;
  for (double v : map.values.data()) m = std::max(m, v);
  return m > 0.0 ? m : 1.0;
}

std::size_t auto_stride(std::size_t extent, std::size_t target) {
  return std::max<std::size_t>(1, (extent + target - 1) / target);
}

double screen_angle(double phase, LeadConvention convention) {
  // SVG rotation is clockwise-positive (y grows downward), so rotate(+phase)
  // sends +pi/2 down and rotate(-phase) draws the mathematical angle.
  const double deg = phase * 180.0 / std::numbers::pi;
  return convention == LeadConvention::paper_downleads ? deg : -deg;
}

struct ArrowSpot {
  double x, y, angle_deg;
};

std::vector<ArrowSpot> arrow_spots(const CoherenceMap& map, const Layout& lay,
                                   const RenderOptions& opts) {
  const std::size_t stride_t =
      opts.arrow_stride_time ? opts.arrow_stride_time : auto_stride(lay.cols, 20);
  const std::size_t stride_j =
      opts.arrow_stride_scale ? opts.arrow_stride_scale : auto_stride(lay.rows, 10);
  const Grid<std::uint8_t> interior = coi_interior_mask(map.grid, map.coi);
  std::vector<ArrowSpot> spots;
  for (std::size_t j = stride_j / 2; j < lay.rows; j += stride_j) {
    for (std::size_t t = stride_t / 2; t < lay.cols; t += stride_t) {
      if (!interior(j, t) || map.masked(j, t)) continue;
      if (map.values(j, t) < opts.arrow_min_coherence) continue;
      spots.push_back({lay.cell_x(static_cast<double>(t) + 0.5),
                       lay.cell_y(static_cast<double>(j) + 0.5),
                       screen_angle(map.phase(j, t), opts.lead_convention)});
    }
  }
  return spots;
}

// y-axis ticks at integer powers of two inside the period range
std::vector<std::pair<double, std::string>> period_ticks(const CoherenceMap& map,
                                                         const Layout& lay) {
  std::vector<std::pair<double, std::string>> ticks;
  const double top_log = std::log2(map.grid.period(0)) - 0.5 * map.grid.dj;
  const double bot_log = std::log2(map.grid.period(lay.rows - 1)) + 0.5 * map.grid.dj;
  for (int p = 0; p < 16; ++p) {
    const double lg = static_cast<double>(p);
    if (lg < top_log || lg > bot_log) continue;
    const double y = lay.y0 + (lg - top_log) / (bot_log - top_log) * lay.h;
    ticks.emplace_back(y, std::to_string(1 << p));
  }
  return ticks;
}

std::vector<std::pair<double, std::string>> date_ticks(const CoherenceMap& map,
                                                       const Layout& lay) {
  std::vector<std::pair<double, std::string>> ticks;
  const std::size_t count = 6;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t t = i * (lay.cols - 1) / (count - 1);
    ticks.emplace_back(lay.cell_x(static_cast<double>(t) + 0.5),
                       (map.start + static_cast<std::int32_t>(t)).iso());
  }
  return ticks;
}

}  // namespace

void RenderOptions::validate() const {
  if (!(arrow_min_coherence >= 0.0 && arrow_min_coherence <= 1.0))
    throw config_error("arrow_min_coherence must be in [0, 1]");
  if (width < 200 || height < 150) throw config_error("image size must be at least 200x150");
  if (color_map != "hot" && color_map != "gray")
    throw config_error("unknown color_map '" + color_map + "'");
}

std::vector<std::vector<LatticePoint>> mask_boundaries(const Grid<std::uint8_t>& mask) {
  // Directed edges walked clockwise on screen around each true cell; edges
  // shared by two true cells appear in both directions and cancel.
  using Edge = std::pair<LatticePoint, LatticePoint>;
  std::map<Edge, bool> edges;  // -> still unused
  auto toggle = [&](LatticePoint a, LatticePoint b) {
    const auto rev = edges.find({b, a});
    if (rev != edges.end())
      edges.erase(rev);
    else
      edges.emplace(Edge{a, b}, true);
  };
  const int rows = static_cast<int>(mask.rows()), cols = static_cast<int>(mask.cols());
  for (int j = 0; j < rows; ++j) {
    for (int t = 0; t < cols; ++t) {
      if (!mask(j, t)) continue;
      toggle({t, j}, {t + 1, j});          // top
      toggle({t + 1, j}, {t + 1, j + 1});  // right
      toggle({t + 1, j + 1}, {t, j + 1});  // bottom
      toggle({t, j + 1}, {t, j});          // left
    }
  }

  std::multimap<LatticePoint, LatticePoint> outgoing;
  for (const auto& [e, unused] : edges) outgoing.emplace(e.first, e.second);

  auto take_next = [&](LatticePoint from, LatticePoint prev) -> std::optional<LatticePoint> {
    auto [lo, hi] = outgoing.equal_range(from);
    if (lo == hi) return std::nullopt;
    // prefer the right turn so touching corners stay separate loops
    const int dx = from.first - prev.first, dy = from.second - prev.second;
    const LatticePoint pref[4] = {{from.first - dy, from.second + dx},   // right turn
                                  {from.first + dx, from.second + dy},   // straight
                                  {from.first + dy, from.second - dx},   // left turn
                                  {prev.first, prev.second}};
    for (const LatticePoint& want : pref) {
      for (auto it = lo; it != hi; ++it) {
        if (it->second == want) {
          outgoing.erase(it);
          return want;
        }
      }
    }
    auto it = lo;
    const LatticePoint next = it->second;
    outgoing.erase(it);
    return next;
  };

  std::vector<std::vector<LatticePoint>> loops;
  while (!outgoing.empty()) {
    const auto first = outgoing.begin();
    const LatticePoint start = first->first;
    LatticePoint cur = first->second;
    outgoing.erase(first);
    std::vector<LatticePoint> loop{start, cur};
    LatticePoint prev = start;
    while (cur != start) {
      const auto next = take_next(cur, prev);
      if (!next) break;  // unreachable for a well-formed parity set
      prev = cur;
      cur = *next;
      loop.push_back(cur);
    }
    loops.push_back(std::move(loop));
  }
  return loops;
}

std::string render_map_svg(const CoherenceMap& map, const SignificanceResult* sig,
                           const RenderOptions& opts) {
  opts.validate();
  if (sig && !sig->mask.same_shape(map.rows(), map.cols()))
    throw data_error("render_map: significance mask shape does not match map");
  if (map.values.empty()) throw data_error("render_map: empty map");

  const Layout lay(map, opts);
  const Grid<std::uint8_t> interior = coi_interior_mask(map.grid, map.coi);
  const double vmax = value_scale_max(map);

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opts.width << "\" height=\""
      << opts.height << "\" viewBox=\"0 0 " << opts.width << " " << opts.height << "\">\n";
  svg << "<rect width=\"" << opts.width << "\" height=\"" << opts.height
      << "\" fill=\"#ffffff\"/>\n";

  // heat cells, run-length merged per row
  svg << "<g shape-rendering=\"crispEdges\">\n";
  for (std::size_t j = 0; j < lay.rows; ++j) {
    std::size_t run_start = 0;
    std::string run_color;
    auto flush = [&](std::size_t end) {
      if (run_color.empty()) return;
      svg << "<rect x=\"" << fmt(lay.cell_x(static_cast<double>(run_start))) << "\" y=\""
          << fmt(lay.cell_y(static_cast<double>(j))) << "\" width=\""
          << fmt(lay.cw * static_cast<double>(end - run_start)) << "\" height=\""
          << fmt(lay.ch) << "\" fill=\"" << run_color << "\"/>\n";
    };
    for (std::size_t t = 0; t < lay.cols; ++t) {
      Rgb c = palette_color(opts.color_map, map.values(j, t) / vmax);
      if (!interior(j, t)) c = pale(c);
      const std::string color = hex_color(c);
      if (color != run_color) {
        flush(t);
        run_start = t;
        run_color = color;
      }
    }
    flush(lay.cols);
  }
  svg << "</g>\n";

  // COI boundary curve
  {
    const double top_log = std::log2(map.grid.period(0)) - 0.5 * map.grid.dj;
    const double bot_log = std::log2(map.grid.period(lay.rows - 1)) + 0.5 * map.grid.dj;
    svg << "<polyline fill=\"none\" stroke=\"#000000\" stroke-width=\"0.8\" "
           "stroke-dasharray=\"4 3\" points=\"";
    bool any = false;
    for (std::size_t t = 0; t < lay.cols; ++t) {
      if (map.coi[t] <= 0.0) continue;
      const double lg = std::clamp(std::log2(map.coi[t]), top_log, bot_log);
      const double y = lay.y0 + (lg - top_log) / (bot_log - top_log) * lay.h;
      svg << fmt(lay.cell_x(static_cast<double>(t) + 0.5)) << "," << fmt(y) << " ";
      any = true;
    }
    svg << "\"/>\n";
    (void)any;
  }

  // thick black significance contour, rasterized on cell boundaries
  if (sig) {
    const auto loops = mask_boundaries(sig->mask);
    svg << "<g fill=\"none\" stroke=\"#000000\" stroke-width=\"2.5\" "
           "stroke-linejoin=\"miter\">\n";
    for (const auto& loop : loops) {
      svg << "<path d=\"";
      for (std::size_t i = 0; i < loop.size(); ++i) {
        svg << (i == 0 ? "M" : "L") << fmt(lay.cell_x(loop[i].first)) << " "
            << fmt(lay.cell_y(loop[i].second));
      }
      svg << "Z\"/>\n";
    }
    svg << "</g>\n";
  }

  // phase arrows
  {
    const auto spots = arrow_spots(map, lay, opts);
    const double len = std::clamp(
        0.75 * std::min(lay.cw * static_cast<double>(
                                     opts.arrow_stride_time ? opts.arrow_stride_time
                                                            : auto_stride(lay.cols, 20)),
                        lay.ch * static_cast<double>(
                                     opts.arrow_stride_scale ? opts.arrow_stride_scale
                                                             : auto_stride(lay.rows, 10))),
        7.0, 16.0);
    svg << "<g stroke=\"#000000\" stroke-width=\"1.2\" fill=\"none\">\n";
    for (const auto& a : spots) {
      svg << "<g transform=\"translate(" << fmt(a.x) << " " << fmt(a.y) << ") rotate("
          << fmt(a.angle_deg) << ")\"><path d=\"M" << fmt(-len / 2) << " 0L" << fmt(len / 2)
          << " 0M" << fmt(len / 2 - 3.2) << " -2.4L" << fmt(len / 2) << " 0L"
          << fmt(len / 2 - 3.2) << " 2.4\"/></g>\n";
    }
    svg << "</g>\n";
  }

  // frame, axes, labels
  svg << "<rect x=\"" << fmt(lay.x0) << "\" y=\"" << fmt(lay.y0) << "\" width=\"" << fmt(lay.w)
      << "\" height=\"" << fmt(lay.h)
      << "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
  svg << "<g font-family=\"sans-serif\" font-size=\"10\" fill=\"#000000\">\n";
  for (const auto& [y, label] : period_ticks(map, lay)) {
    svg << "<line x1=\"" << fmt(lay.x0 - 4) << "\" y1=\"" << fmt(y) << "\" x2=\"" << fmt(lay.x0)
        << "\" y2=\"" << fmt(y) << "\" stroke=\"#000000\"/>\n";
    svg << "<text x=\"" << fmt(lay.x0 - 7) << "\" y=\"" << fmt(y + 3)
        << "\" text-anchor=\"end\">" << label << "</text>\n";
  }
  for (const auto& [x, label] : date_ticks(map, lay)) {
    svg << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(lay.y0 + lay.h) << "\" x2=\"" << fmt(x)
        << "\" y2=\"" << fmt(lay.y0 + lay.h + 4) << "\" stroke=\"#000000\"/>\n";
    svg << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(lay.y0 + lay.h + 16)
        << "\" text-anchor=\"middle\">" << label << "</text>\n";
  }
  svg << "<text x=\"14\" y=\"" << fmt(lay.y0 + lay.h / 2)
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 " << fmt(lay.y0 + lay.h / 2)
      << ")\">period (days)</text>\n";
  std::string title = map_kind_name(map.kind);
  if (!map.source_names.empty()) {
    title += ": " + map.source_names[0];
    for (std::size_t i = 1; i < map.source_names.size(); ++i) {
      const bool confounder = map.kind == MapKind::pwc && i + 1 == map.source_names.size();
      title += (confounder ? " | " : " vs ") + map.source_names[i];
    }
  }
  svg << "<text x=\"" << fmt(lay.x0) << "\" y=\"18\" font-size=\"12\">" << title << "</text>\n";

  // colorbar
  {
    const double bx = lay.x0 + lay.w + 18, bw = 12;
    const int steps = 64;
    for (int i = 0; i < steps; ++i) {
      const double v = 1.0 - (static_cast<double>(i) + 0.5) / steps;
      svg << "<rect x=\"" << fmt(bx) << "\" y=\"" << fmt(lay.y0 + lay.h * i / steps)
          << "\" width=\"" << fmt(bw) << "\" height=\"" << fmt(lay.h / steps + 0.5)
          << "\" fill=\"" << hex_color(palette_color(opts.color_map, v)) << "\"/>\n";
    }
    svg << "<rect x=\"" << fmt(bx) << "\" y=\"" << fmt(lay.y0) << "\" width=\"" << fmt(bw)
        << "\" height=\"" << fmt(lay.h)
        << "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"0.8\"/>\n";
    for (int i = 0; i <= 4; ++i) {
      const double v = vmax * (4 - i) / 4.0;
      svg << "<text x=\"" << fmt(bx + bw + 4) << "\" y=\"" << fmt(lay.y0 + lay.h * i / 4.0 + 3)
          << "\">" << fmt(v) << "</text>\n";
    }
  }
  svg << "</g>\n</svg>\n";
  return svg.str();
}

std::vector<std::uint8_t> render_map(const CoherenceMap& map, const SignificanceResult& sig,
                                     const RenderOptions& opts) {
  if (opts.format == ImageFormat::png) return render_map_png(map, &sig, opts);
  const std::string svg = render_map_svg(map, &sig, opts);
  return {svg.begin(), svg.end()};
}

}  // namespace wcoh
