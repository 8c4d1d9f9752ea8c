#ifndef WCOH_WAVELET_HPP
#define WCOH_WAVELET_HPP

namespace wcoh {

// Morlet mother wavelet parameterized by its center angular frequency.
// Below omega0 = 5 the zero-mean property degrades past 1e-6 without a
// correction term, so smaller values are rejected.
struct WaveletSpec {
  double omega0 = 6.0;

  void validate() const;  // throws config_error
};

// Scale-to-Fourier-period conversion constant: 4 pi / (omega0 + sqrt(2 + omega0^2)).
double fourier_factor(const WaveletSpec& spec);

// Normalized daughter-wavelet spectrum sampled at angular frequency `omega`:
//   pi^(-1/4) * sqrt(2 pi s / dt) * exp(-(s*omega - omega0)^2 / 2)   for omega > 0
//   0                                                                for omega <= 0
// The zero negative branch makes the wavelet analytic.
double morlet_fourier(double omega, double scale, const WaveletSpec& spec, double dt = 1.0);

}  // namespace wcoh

#endif
