#ifndef WCOH_RENDER_HPP
#define WCOH_RENDER_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "wcoh/coherence.hpp"
#include "wcoh/significance.hpp"

namespace wcoh {

// Arrow angle convention.
//   math_angle      - counterclockwise mathematical angle, phase +pi/2 points up
//   paper_downleads - phase +pi/2 (first series leads by a quarter period)
//                     points down; 0 stays right (in-phase), pi left (anti-phase)
enum class LeadConvention { math_angle, paper_downleads };

enum class ImageFormat { svg, png };

struct RenderOptions {
  std::string color_map = "hot";  // "hot" or "gray", monotone palettes
  std::size_t arrow_stride_time = 0;   // 0 = auto (~20 arrows across)
  std::size_t arrow_stride_scale = 0;  // 0 = auto (~10 arrows down)
  double arrow_min_coherence = 0.5;
  LeadConvention lead_convention = LeadConvention::paper_downleads;
  std::size_t width = 960;
  std::size_t height = 640;
  ImageFormat format = ImageFormat::svg;

  void validate() const;  // throws config_error
};

// Lattice point on cell boundaries: x in [0..cols], y in [0..rows].
using LatticePoint = std::pair<int, int>;

// Closed loops tracing the boundary of the mask's true cells along cell
// edges, interior on the right when walking. Cell (row j, col t) spans
// lattice x in [t, t+1], y in [j, j+1]. Exact: no smoothing, so loop
// membership matches the mask cell-for-cell.
std::vector<std::vector<LatticePoint>> mask_boundaries(const Grid<std::uint8_t>& mask);

// Publication-style map: heat-colored values, pale outside the COI, thick
// black significance contour, decimated phase arrows, log2(period) y-axis
// increasing downward. Byte-identical output for identical inputs.
std::string render_map_svg(const CoherenceMap& map, const SignificanceResult* sig,
                           const RenderOptions& opts = {});
std::vector<std::uint8_t> render_map_png(const CoherenceMap& map, const SignificanceResult* sig,
                                         const RenderOptions& opts = {});

// Dispatches on opts.format; SVG bytes are the UTF-8 document.
std::vector<std::uint8_t> render_map(const CoherenceMap& map, const SignificanceResult& sig,
                                     const RenderOptions& opts = {});

}  // namespace wcoh

#endif
