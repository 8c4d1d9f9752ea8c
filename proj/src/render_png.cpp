#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "wcoh/errors.hpp"
#include "wcoh/render.hpp"

// Minimal raster backend: the SVG is the byte-stable reference output, the
// PNG is a viewing convenience (plot area only, no text). The encoder emits
// stored (uncompressed) deflate blocks so no compression library is needed.

namespace wcoh {

namespace {

struct Raster {
  std::size_t w, h;
  std::vector<std::uint8_t> px;  // RGB8

  Raster(std::size_t width, std::size_t height) : w(width), h(height), px(width * height * 3, 255) {}

  void set(std::int64_t x, std::int64_t y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    if (x < 0 || y < 0 || x >= static_cast<std::int64_t>(w) || y >= static_cast<std::int64_t>(h))
      return;
    const std::size_t i = (static_cast<std::size_t>(y) * w + static_cast<std::size_t>(x)) * 3;
    px[i] = r;
    px[i + 1] = g;
    px[i + 2] = b;
  }

  void fill_rect(double x0, double y0, double x1, double y1, std::uint8_t r, std::uint8_t g,
                 std::uint8_t b) {
    const auto xi0 = static_cast<std::int64_t>(std::floor(x0));
    const auto yi0 = static_cast<std::int64_t>(std::floor(y0));
    const auto xi1 = static_cast<std::int64_t>(std::ceil(x1));
    const auto yi1 = static_cast<std::int64_t>(std::ceil(y1));
    for (std::int64_t y = yi0; y < yi1; ++y)
      for (std::int64_t x = xi0; x < xi1; ++x) set(x, y, r, g, b);
  }

  void disc(double cx, double cy, double radius, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    const auto lo_x = static_cast<std::int64_t>(std::floor(cx - radius));
    const auto hi_x = static_cast<std::int64_t>(std::ceil(cx + radius));
    const auto lo_y = static_cast<std::int64_t>(std::floor(cy - radius));
    const auto hi_y = static_cast<std::int64_t>(std::ceil(cy + radius));
    for (std::int64_t y = lo_y; y <= hi_y; ++y)
      for (std::int64_t x = lo_x; x <= hi_x; ++x) {
        const double dx = static_cast<double>(x) + 0.5 - cx;
        const double dy = static_cast<double>(y) + 0.5 - cy;
        if (dx * dx + dy * dy <= radius * radius) set(x, y, r, g, b);
      }
  }

  void line(double x0, double y0, double x1, double y1, double width, std::uint8_t r,
            std::uint8_t g, std::uint8_t b) {
    const double len = std::hypot(x1 - x0, y1 - y0);
    const int steps = std::max(2, static_cast<int>(std::ceil(len * 2.0)));
    for (int i = 0; i <= steps; ++i) {
      const double f = static_cast<double>(i) / steps;
      disc(x0 + (x1 - x0) * f, y0 + (y1 - y0) * f, width / 2.0, r, g, b);
    }
  }
};

std::uint32_t crc32_of(const std::uint8_t* data, std::size_t len, std::uint32_t crc = 0) {
  static const auto table = [] {
    std::array<std::uint32_t, 256> t{};
    for (std::uint32_t n = 0; n < 256; ++n) {
      std::uint32_t c = n;
      for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
      t[n] = c;
    }
    return t;
  }();
  crc = ~crc;
  for (std::size_t i = 0; i < len; ++i) crc = table[(crc ^ data[i]) & 0xff] ^ (crc >> 8);
  return ~crc;
}

void push_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

void push_chunk(std::vector<std::uint8_t>& out, const char type[4],
                const std::vector<std::uint8_t>& body) {
  push_u32(out, static_cast<std::uint32_t>(body.size()));
  std::vector<std::uint8_t> typed(type, type + 4);
  typed.insert(typed.end(), body.begin(), body.end());
  out.insert(out.end(), typed.begin(), typed.end());
  push_u32(out, crc32_of(typed.data(), typed.size()));
}

std::vector<std::uint8_t> zlib_stored(const std::vector<std::uint8_t>& raw) {
  std::vector<std::uint8_t> z{0x78, 0x01};
  std::size_t pos = 0;
  while (pos < raw.size()) {
    const std::size_t take = std::min<std::size_t>(65535, raw.size() - pos);
    const bool last = pos + take == raw.size();
    z.push_back(last ? 1 : 0);
    z.push_back(static_cast<std::uint8_t>(take & 0xff));
    z.push_back(static_cast<std::uint8_t>(take >> 8));
    z.push_back(static_cast<std::uint8_t>(~take & 0xff));
    z.push_back(static_cast<std::uint8_t>((~take >> 8) & 0xff));
    z.insert(z.end(), raw.begin() + pos, raw.begin() + pos + take);
    pos += take;
  }
  std::uint32_t a = 1, b = 0;
  for (std::uint8_t byte : raw) {
    a = (a + byte) % 65521;
    b = (b + a) % 65521;
  }
  push_u32(z, (b << 16) | a);
  return z;
}

std::vector<std::uint8_t> encode_png(const Raster& img) {
  std::vector<std::uint8_t> raw;
  raw.reserve(img.h * (img.w * 3 + 1));
  for (std::size_t y = 0; y < img.h; ++y) {
    raw.push_back(0);  // filter: none
    raw.insert(raw.end(), img.px.begin() + y * img.w * 3, img.px.begin() + (y + 1) * img.w * 3);
  }
  std::vector<std::uint8_t> out{0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};
  std::vector<std::uint8_t> ihdr;
  push_u32(ihdr, static_cast<std::uint32_t>(img.w));
  push_u32(ihdr, static_cast<std::uint32_t>(img.h));
  ihdr.insert(ihdr.end(), {8, 2, 0, 0, 0});  // 8-bit RGB
  push_chunk(out, "IHDR", ihdr);
  push_chunk(out, "IDAT", zlib_stored(raw));
  push_chunk(out, "IEND", {});
  return out;
}

struct Rgb8 {
  std::uint8_t r, g, b;
};

Rgb8 heat(const std::string& palette, double v, bool inside_coi) {
  v = std::clamp(v, 0.0, 1.0);
  double r, g, b;
  if (palette == "gray") {
    r = g = b = v;
  } else {
    r = std::clamp(3.0 * v, 0.0, 1.0);
    g = std::clamp(3.0 * v - 1.0, 0.0, 1.0);
    b = std::clamp(3.0 * v - 2.0, 0.0, 1.0);
  }
  if (!inside_coi) {
    r += (1.0 - r) * 0.65;
    g += (1.0 - g) * 0.65;
    b += (1.0 - b) * 0.65;
  }
  return {static_cast<std::uint8_t>(std::lround(r * 255)),
          static_cast<std::uint8_t>(std::lround(g * 255)),
          static_cast<std::uint8_t>(std::lround(b * 255))};
}

}  // namespace

std::vector<std::uint8_t> render_map_png(const CoherenceMap& map, const SignificanceResult* sig,
                                         const RenderOptions& opts) {
  opts.validate();
  if (map.values.empty()) throw data_error("render_map: empty map");
  if (sig && !sig->mask.same_shape(map.rows(), map.cols()))
    throw data_error("render_map: significance mask shape does not match map");

  Raster img(opts.width, opts.height);
  const double x0 = 8, y0 = 8;
  const double w = static_cast<double>(opts.width) - 16;
  const double h = static_cast<double>(opts.height) - 16;
  const std::size_t rows = map.rows(), cols = map.cols();
  const double cw = w / static_cast<double>(cols), ch = h / static_cast<double>(rows);

  double vmax = 1.0;
  if (map.kind == MapKind::xwt_power) {
    vmax = 0.0;
    for (double v : map.values.data()) vmax = std::max(vmax, v);
    if (vmax <= 0.0) vmax = 1.0;
  }

  const Grid<std::uint8_t> interior = coi_interior_mask(map.grid, map.coi);
  for (std::size_t j = 0; j < rows; ++j)
    for (std::size_t t = 0; t < cols; ++t) {
      const Rgb8 c = heat(opts.color_map, map.values(j, t) / vmax, interior(j, t) != 0);
      img.fill_rect(x0 + cw * static_cast<double>(t), y0 + ch * static_cast<double>(j),
                    x0 + cw * static_cast<double>(t + 1), y0 + ch * static_cast<double>(j + 1),
                    c.r, c.g, c.b);
    }

  if (sig) {
    for (const auto& loop : mask_boundaries(sig->mask))
      for (std::size_t i = 1; i < loop.size(); ++i)
        img.line(x0 + cw * loop[i - 1].first, y0 + ch * loop[i - 1].second,
                 x0 + cw * loop[i].first, y0 + ch * loop[i].second, 2.5, 0, 0, 0);
  }

  // phase arrows on the auto stride
  const std::size_t stride_t =
      opts.arrow_stride_time ? opts.arrow_stride_time
                             : std::max<std::size_t>(1, (cols + 19) / 20);
  const std::size_t stride_j =
      opts.arrow_stride_scale ? opts.arrow_stride_scale
                              : std::max<std::size_t>(1, (rows + 9) / 10);
  const double len =
      std::clamp(0.75 * std::min(cw * static_cast<double>(stride_t),
                                 ch * static_cast<double>(stride_j)), 7.0, 16.0);
  for (std::size_t j = stride_j / 2; j < rows; j += stride_j)
    for (std::size_t t = stride_t / 2; t < cols; t += stride_t) {
      if (!interior(j, t) || map.masked(j, t)) continue;
      if (map.values(j, t) < opts.arrow_min_coherence) continue;
      const double phase = map.phase(j, t);
      const double angle = opts.lead_convention == LeadConvention::paper_downleads ? phase : -phase;
      const double cx = x0 + cw * (static_cast<double>(t) + 0.5);
      const double cy = y0 + ch * (static_cast<double>(j) + 0.5);
      const double dx = std::cos(angle) * len / 2.0, dy = std::sin(angle) * len / 2.0;
      img.line(cx - dx, cy - dy, cx + dx, cy + dy, 1.4, 0, 0, 0);
      // arrow head
      const double ha = angle + std::numbers::pi * 0.8;
      const double hb = angle - std::numbers::pi * 0.8;
      img.line(cx + dx, cy + dy, cx + dx + std::cos(ha) * 3.5, cy + dy + std::sin(ha) * 3.5, 1.4,
               0, 0, 0);
      img.line(cx + dx, cy + dy, cx + dx + std::cos(hb) * 3.5, cy + dy + std::sin(hb) * 3.5, 1.4,
               0, 0, 0);
    }

  return encode_png(img);
}

}  // namespace wcoh
