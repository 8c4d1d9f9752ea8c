#ifndef WCOH_SCALE_GRID_HPP
#define WCOH_SCALE_GRID_HPP

#include <cstddef>
#include <vector>

#include "wcoh/wavelet.hpp"

namespace wcoh {

// Geometric ladder of wavelet scales s_j = s0 * 2^(j*dj) with the sampling
// step and the scale-to-period conversion constant.
struct ScaleGrid {
  std::size_t n = 0;  // sample count the grid was built for
  double dt = 1.0;
  double s0 = 2.0;
  double dj = 1.0 / 12.0;
  double max_period_fraction = 1.0;
  double fourier_factor = 0.0;
  std::vector<double> scales;

  std::size_t count() const { return scales.size(); }
  double period(std::size_t j) const { return fourier_factor * scales[j]; }
  std::vector<double> periods() const;

  bool same_layout(const ScaleGrid& other) const;
};

// Largest geometric ladder whose longest period stays within
// max_period_fraction * n * dt. Throws config_error when no scale fits.
ScaleGrid build_scale_grid(std::size_t n, double dt, double s0, double dj,
                           double max_period_fraction, const WaveletSpec& spec = {});

// coi(t) = fourier_factor * sqrt(2) * min(t, n-1-t) * dt; periods above it
// at column t are edge-affected and unreliable.
std::vector<double> cone_of_influence(std::size_t n, double dt, double fourier_factor);

}  // namespace wcoh

#endif
