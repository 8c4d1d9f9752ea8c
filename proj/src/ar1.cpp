#include "wcoh/ar1.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wcoh/errors.hpp"

namespace wcoh {

void Ar1Model::validate() const {
  if (!(std::abs(phi) < 1.0))
    throw config_error("AR(1) phi must satisfy |phi| < 1, got " + std::to_string(phi));
  if (!(sigma >= 0.0)) throw config_error("AR(1) sigma must be >= 0");
}

Ar1Model fit_ar1(const TimeSeries& ts) {
  ts.validate();
  const std::size_t n = ts.size();
  if (n < 8) throw data_error("fit_ar1: need at least 8 observations, got " + std::to_string(n));

  double mean = 0.0;
  for (double v : ts.values) mean += v;
  mean /= static_cast<double>(n);

  double d0 = 0.0, d1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double di = ts.values[i] - mean;
    d0 += di * di;
    if (i > 0) d1 += di * (ts.values[i - 1] - mean);
  }
  if (d0 == 0.0) throw data_error("fit_ar1: series '" + ts.name + "' is constant");

  Ar1Model model;
  model.phi = std::clamp(d1 / d0, 0.0, 0.99);
  model.mean = mean;
  const double variance = d0 / static_cast<double>(n);
  model.sigma = std::sqrt(variance * (1.0 - model.phi * model.phi));
  return model;
}

TimeSeries simulate_ar1(const Ar1Model& model, std::size_t n, rng::Stream stream,
                        std::optional<double> x0) {
  model.validate();
  if (n < 2) throw config_error("simulate_ar1: need n >= 2");

  rng::Xoshiro256pp gen(stream);
  TimeSeries out{"ar1_surrogate", Date::from_ymd(2000, 1, 1), 1.0, std::vector<double>(n)};
  const double stationary_sd = model.sigma / std::sqrt(1.0 - model.phi * model.phi);
  out.values[0] = x0 ? *x0 : model.mean + stationary_sd * gen.normal();
  const double drift = model.mean * (1.0 - model.phi);
  for (std::size_t t = 1; t < n; ++t)
    out.values[t] = drift + model.phi * out.values[t - 1] + model.sigma * gen.normal();
  return out;
}

}  // namespace wcoh
