#include "wcoh/scale_grid.hpp"

#include <cmath>
#include <string>

#include "wcoh/errors.hpp"

namespace wcoh {

std::vector<double> ScaleGrid::periods() const {
  std::vector<double> out(scales.size());
  for (std::size_t j = 0; j < scales.size(); ++j) out[j] = fourier_factor * scales[j];
  return out;
}

bool ScaleGrid::same_layout(const ScaleGrid& other) const {
  return n == other.n && dt == other.dt && s0 == other.s0 && dj == other.dj &&
         fourier_factor == other.fourier_factor && scales.size() == other.scales.size();
}

ScaleGrid build_scale_grid(std::size_t n, double dt, double s0, double dj,
                           double max_period_fraction, const WaveletSpec& spec) {
  spec.validate();
  if (n < 8) throw config_error("build_scale_grid: need n >= 8, got " + std::to_string(n));
  if (dt <= 0.0) throw config_error("build_scale_grid: dt must be positive");
  if (s0 < dt) throw config_error("build_scale_grid: s0 must be >= dt");
  if (!(dj > 0.0 && dj <= 1.0)) throw config_error("build_scale_grid: dj must be in (0, 1]");
  if (!(max_period_fraction > 0.0 && max_period_fraction <= 1.0))
    throw config_error("build_scale_grid: max_period_fraction must be in (0, 1]");

  ScaleGrid grid;
  grid.n = n;
  grid.dt = dt;
  grid.s0 = s0;
  grid.dj = dj;
  grid.max_period_fraction = max_period_fraction;
  grid.fourier_factor = fourier_factor(spec);

  const double period_cap = max_period_fraction * static_cast<double>(n) * dt;
  for (std::size_t j = 0;; ++j) {
    const double s = s0 * std::exp2(static_cast<double>(j) * dj);
    if (grid.fourier_factor * s > period_cap) break;
    grid.scales.push_back(s);
  }
  if (grid.scales.empty())
    throw config_error("build_scale_grid: no admissible scales (smallest period " +
                       std::to_string(grid.fourier_factor * s0) + " d exceeds cap " +
                       std::to_string(period_cap) + " d)");
  return grid;
}

std::vector<double> cone_of_influence(std::size_t n, double dt, double ff) {
  if (n < 2) throw config_error("cone_of_influence: need n >= 2");
  std::vector<double> coi(n);
  for (std::size_t t = 0; t < n; ++t) {
    const double edge_dist = static_cast<double>(std::min(t, n - 1 - t));
    coi[t] = ff * std::sqrt(2.0) * edge_dist * dt;
  }
  return coi;
}

}  // namespace wcoh
