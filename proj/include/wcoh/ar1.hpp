#ifndef WCOH_AR1_HPP
#define WCOH_AR1_HPP

#include <optional>

#include "wcoh/rng.hpp"
#include "wcoh/time_series.hpp"

namespace wcoh {

// First-order autoregressive (red noise) null model.
struct Ar1Model {
  double phi = 0.0;    // lag-1 coefficient, clamped to [0, 0.99] when fitted
  double sigma = 1.0;  // innovation standard deviation
  double mean = 0.0;

  void validate() const;  // |phi| < 1, sigma >= 0
};

// phi = lag-1 sample autocorrelation clamped to [0, 0.99];
// sigma^2 = sample variance * (1 - phi^2); mean = sample mean.
Ar1Model fit_ar1(const TimeSeries& ts);

// x_0 from the stationary distribution (or forced via x0), then
// x_t = mean*(1-phi) + phi*x_{t-1} + sigma*z_t. Deterministic per stream.
TimeSeries simulate_ar1(const Ar1Model& model, std::size_t n, rng::Stream stream,
                        std::optional<double> x0 = std::nullopt);

}  // namespace wcoh

#endif
