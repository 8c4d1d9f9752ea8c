#ifndef WCOH_CWT_HPP
#define WCOH_CWT_HPP

#include <complex>
#include <string>
#include <vector>

#include "wcoh/grid.hpp"
#include "wcoh/scale_grid.hpp"
#include "wcoh/time_series.hpp"

namespace wcoh {

// How the series is padded before the FFT.
//   pow2     - zero-pad to the next power of two (conventional default; residual
//              wrap-around at large scales lives in the COI-marked edges)
//   extended - zero-pad to the next power of two past n + 6.5*s_max, making
//              wrap-around negligible (< 1e-9) at every scale
//   none     - no padding; requires a power-of-two length and makes the
//              transform exactly circular
enum class Padding { pow2, extended, none };

// Complex (scale x time) coefficient grid with its cone of influence.
struct CwtMatrix {
  Grid<std::complex<double>> coefficients;  // grid.count() rows x n columns
  ScaleGrid grid;
  std::vector<double> coi;  // per-column maximum reliable period, days
  std::vector<std::string> source_names;
  Date start{};
  double mean_removed = 0.0;
  bool detrended = false;

  std::size_t cols() const { return coefficients.cols(); }
  std::size_t rows() const { return coefficients.rows(); }
};

// Morlet CWT: each scale row is the inverse FFT of (series spectrum x
// daughter-wavelet spectrum). The series mean (and optionally a linear
// trend) is removed first. O(J * N log N).
CwtMatrix cwt_transform(const TimeSeries& ts, const ScaleGrid& grid, const WaveletSpec& spec = {},
                        Padding padding = Padding::pow2, bool detrend = false);

}  // namespace wcoh

#endif
