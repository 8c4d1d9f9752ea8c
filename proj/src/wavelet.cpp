#include "wcoh/wavelet.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "wcoh/errors.hpp"

namespace wcoh {

void WaveletSpec::validate() const {
  if (!(omega0 >= 5.0))
    throw config_error("omega0 must be >= 5, got " + std::to_string(omega0));
}

double fourier_factor(const WaveletSpec& spec) {
  return 4.0 * std::numbers::pi / (spec.omega0 + std::sqrt(2.0 + spec.omega0 * spec.omega0));
}

double morlet_fourier(double omega, double scale, const WaveletSpec& spec, double dt) {
  if (scale <= 0.0) throw config_error("morlet_fourier: scale must be positive");
  if (omega <= 0.0) return 0.0;
  const double arg = scale * omega - spec.omega0;
  constexpr double pi_quarter = 0.7511255444649425;  // pi^(-1/4)
  return pi_quarter * std::sqrt(2.0 * std::numbers::pi * scale / dt) * std::exp(-0.5 * arg * arg);
}

}  // namespace wcoh
