#include "wcoh/fft.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <stdexcept>

namespace wcoh {

FftPlan::FftPlan(std::size_t n) : n_(n) {
  if (!is_pow2(n)) throw std::invalid_argument("FftPlan: length must be a power of two");
  twiddle_.resize(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k) {
    const double ang = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    twiddle_[k] = {std::cos(ang), std::sin(ang)};
  }
  bitrev_.resize(n);
  std::uint32_t bits = 0;
  while ((std::size_t{1} << bits) < n) ++bits;
  for (std::size_t i = 0; i < n; ++i) {
    std::uint32_t r = 0;
    for (std::uint32_t b = 0; b < bits; ++b) r |= ((i >> b) & 1u) << (bits - 1 - b);
    bitrev_[i] = r;
  }
}

void FftPlan::transform(std::span<std::complex<double>> a, bool invert) const {
  const std::size_t n = n_;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = bitrev_[i];
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t stride = n / len;
    const std::size_t half = len / 2;
    for (std::size_t blk = 0; blk < n; blk += len) {
      for (std::size_t k = 0; k < half; ++k) {
        std::complex<double> w = twiddle_[k * stride];
        if (invert) w = std::conj(w);
        const std::complex<double> u = a[blk + k];
        const std::complex<double> v = a[blk + k + half] * w;
        a[blk + k] = u + v;
        a[blk + k + half] = u - v;
      }
    }
  }
  if (invert) {
    const double inv_n = 1.0 / static_cast<double>(n);
    for (auto& x : a) x *= inv_n;
  }
}

void FftPlan::forward(std::span<std::complex<double>> a) const {
  if (a.size() != n_) throw std::invalid_argument("FftPlan::forward: size mismatch");
  transform(a, false);
}

void FftPlan::inverse(std::span<std::complex<double>> a) const {
  if (a.size() != n_) throw std::invalid_argument("FftPlan::inverse: size mismatch");
  transform(a, true);
}

const FftPlan& FftPlan::shared(std::size_t n) {
  thread_local std::map<std::size_t, std::unique_ptr<FftPlan>> cache;
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<FftPlan>(n);
  return *slot;
}

}  // namespace wcoh
