#ifndef WCOH_COHERENCE_HPP
#define WCOH_COHERENCE_HPP

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "wcoh/config.hpp"
#include "wcoh/cwt.hpp"
#include "wcoh/grid.hpp"
#include "wcoh/smoothing.hpp"

namespace wcoh {

enum class MapKind { wtc, pwc, xwt_power };

const char* map_kind_name(MapKind kind);
MapKind map_kind_from_name(const std::string& name);

// Real-valued (scale x time) result grid: squared coherence, partial
// coherence, or cross wavelet power, with its phase and COI. Cells where the
// estimate is undefined (zero power, degenerate confounder) carry
// masked = 1 and value/phase 0.
struct CoherenceMap {
  MapKind kind = MapKind::wtc;
  Grid<double> values;
  Grid<double> phase;  // (-pi, pi]
  Grid<std::uint8_t> masked;
  ScaleGrid grid;
  std::vector<double> coi;
  Date start{};
  std::vector<std::string> source_names;
  // The full configuration the map was produced under. The coherence
  // operations fill the smoothing part; the pipeline overwrites the whole
  // thing with the resolved run config for provenance.
  AnalysisConfig meta;
  std::size_t clip_count = 0;  // pwc cells clipped into [0,1]

  // filled by attach_significance
  std::vector<double> scale_threshold;  // per-scale mode, one entry per scale
  Grid<double> cell_threshold;          // per-cell mode

  bool has_threshold() const { return !scale_threshold.empty() || !cell_threshold.empty(); }
  double threshold_at(std::size_t j, std::size_t t) const;

  std::size_t rows() const { return values.rows(); }
  std::size_t cols() const { return values.cols(); }
};

// Smoothed complex coherency gamma = S(Wxy/s) / sqrt(S(|Wx|^2/s) S(|Wy|^2/s))
// together with the smoothed cross spectrum (the phase carrier) and the
// zero-denominator mask. |gamma| <= 1 up to rounding by Cauchy-Schwarz.
struct Coherency {
  Grid<std::complex<double>> gamma;
  Grid<std::complex<double>> smoothed_cross;
  Grid<std::uint8_t> masked;
};

// Cell-wise W_x * conj(W_y).
CwtMatrix cross_transform(const CwtMatrix& wx, const CwtMatrix& wy);

Coherency coherency(const CwtMatrix& wx, const CwtMatrix& wy, const SmoothingSpec& spec = {});

// Cell-wise atan2(Im, Re) of the smoothed cross spectrum; zero cells map to 0.
Grid<double> phase_difference(const Grid<std::complex<double>>& smoothed_cross);

// Squared wavelet coherence |gamma|^2 with phase from the smoothed cross spectrum.
CoherenceMap wtc(const CwtMatrix& wx, const CwtMatrix& wy, const SmoothingSpec& spec = {});

// Partial wavelet coherence of (y, x1) controlling for x2:
//   |g_yx1 - g_yx2 * g_x2x1|^2 / ((1 - |g_yx2|^2)(1 - |g_x2x1|^2))
// with g_ab = S(W_a conj(W_b))-normalized coherencies, i.e. the squared
// partial correlation of the residuals after projecting out x2; clipped to
// [0,1]. Cells where a confounder coherency modulus reaches 1 - 1e-6 are
// masked.
CoherenceMap pwc(const CwtMatrix& wy, const CwtMatrix& wx1, const CwtMatrix& wx2,
                 const SmoothingSpec& spec = {});

// Cross wavelet power |W_xy| with the raw cross-spectrum phase.
CoherenceMap xwt_power(const CwtMatrix& wx, const CwtMatrix& wy);

}  // namespace wcoh

#endif
