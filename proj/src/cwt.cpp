#include "wcoh/cwt.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "wcoh/errors.hpp"
#include "wcoh/fft.hpp"

namespace wcoh {

namespace {

std::size_t padded_length(std::size_t n, double s_max, Padding padding) {
  switch (padding) {
    case Padding::pow2:
      return next_pow2(n);
    case Padding::extended:
      return next_pow2(n + static_cast<std::size_t>(std::ceil(6.5 * s_max)));
    case Padding::none:
      if (!is_pow2(n))
        throw config_error("padding 'none' requires a power-of-two length, got " +
                           std::to_string(n));
      return n;
  }
  return next_pow2(n);
}

}  // namespace

CwtMatrix cwt_transform(const TimeSeries& ts, const ScaleGrid& grid, const WaveletSpec& spec,
                        Padding padding, bool detrend) {
  ts.validate();
  spec.validate();
  const std::size_t n = ts.size();
  if (n != grid.n)
    throw data_error("cwt_transform: series length " + std::to_string(n) +
                     " does not match grid length " + std::to_string(grid.n));

  CwtMatrix out;
  out.grid = grid;
  out.coi = cone_of_influence(n, grid.dt, grid.fourier_factor);
  out.source_names = {ts.name};
  out.start = ts.start;
  out.detrended = detrend;

  std::vector<double> x(ts.values);
  if (detrend) {
    // least-squares line through (i, x_i)
    const double nm1 = static_cast<double>(n - 1);
    double mean_t = 0.5 * nm1, mean_x = 0.0;
    for (double v : x) mean_x += v;
    mean_x /= static_cast<double>(n);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double dt_i = static_cast<double>(i) - mean_t;
      num += dt_i * (x[i] - mean_x);
      den += dt_i * dt_i;
    }
    const double slope = num / den;
    for (std::size_t i = 0; i < n; ++i)
      x[i] -= mean_x + slope * (static_cast<double>(i) - mean_t);
    out.mean_removed = mean_x;
  } else {
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);
    for (double& v : x) v -= mean;
    out.mean_removed = mean;
  }

  const std::size_t len = padded_length(n, grid.scales.back(), padding);
  const FftPlan& plan = FftPlan::shared(len);

  std::vector<std::complex<double>> spectrum(len, 0.0);
  for (std::size_t i = 0; i < n; ++i) spectrum[i] = x[i];
  plan.forward(spectrum);

  std::vector<double> omega(len);
  const double domega = 2.0 * std::numbers::pi / (static_cast<double>(len) * grid.dt);
  for (std::size_t k = 0; k < len; ++k) {
    const double signed_k = (k <= len / 2) ? static_cast<double>(k)
                                           : static_cast<double>(k) - static_cast<double>(len);
    omega[k] = signed_k * domega;
  }

  const std::size_t rows = grid.count();
  out.coefficients = Grid<std::complex<double>>(rows, n);
  std::vector<std::complex<double>> work(len);
  for (std::size_t j = 0; j < rows; ++j) {
    const double s = grid.scales[j];
    for (std::size_t k = 0; k < len; ++k)
      work[k] = spectrum[k] * morlet_fourier(omega[k], s, spec, grid.dt);
    plan.inverse(work);
    for (std::size_t t = 0; t < n; ++t) out.coefficients(j, t) = work[t];
  }
  return out;
}

}  // namespace wcoh
