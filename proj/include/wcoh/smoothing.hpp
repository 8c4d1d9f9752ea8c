#ifndef WCOH_SMOOTHING_HPP
#define WCOH_SMOOTHING_HPP

#include <complex>

#include "wcoh/grid.hpp"
#include "wcoh/scale_grid.hpp"

namespace wcoh {

// Time-frequency smoothing kernel: per-scale Gaussian in time (std =
// time_bandwidth * scale) followed by a boxcar across scales whose total
// width is scale_octaves octaves, rounded to an odd number of dj steps.
struct SmoothingSpec {
  double time_bandwidth = 1.0;
  double scale_octaves = 0.6;

  void validate() const;  // throws config_error
};

// Smooths each row by FFT convolution with a unit-sum truncated Gaussian
// (zero-padded, renormalized by the in-record kernel mass so constants are
// preserved at every column), then applies the scale boxcar per column.
Grid<std::complex<double>> smooth_tf(const Grid<std::complex<double>>& m, const ScaleGrid& grid,
                                     const SmoothingSpec& spec = {});
// Real overload for nonnegative power grids; FFT rounding residue below zero
// is clipped so downstream square roots stay real.
Grid<double> smooth_tf(const Grid<double>& m, const ScaleGrid& grid,
                       const SmoothingSpec& spec = {});

// Number of scale rows in the boxcar (odd, >= 1).
std::size_t scale_boxcar_rows(double scale_octaves, double dj);

}  // namespace wcoh

#endif
