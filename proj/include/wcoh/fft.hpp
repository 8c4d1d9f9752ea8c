#ifndef WCOH_FFT_HPP
#define WCOH_FFT_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace wcoh {

constexpr bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// Iterative radix-2 complex FFT with a precomputed twiddle table.
// All transform lengths in this project are powers of two by construction.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n);

  std::size_t size() const { return n_; }

  // In-place DFT, X_k = sum_n x_n e^{-2 pi i k n / N}.
  void forward(std::span<std::complex<double>> a) const;
  // In-place inverse including the 1/N factor.
  void inverse(std::span<std::complex<double>> a) const;

  // Per-thread plan cache; plans are immutable once built.
  static const FftPlan& shared(std::size_t n);

 private:
  void transform(std::span<std::complex<double>> a, bool invert) const;

  std::size_t n_;
  std::vector<std::complex<double>> twiddle_;  // e^{-2 pi i k / N}, k < N/2
  std::vector<std::uint32_t> bitrev_;
};

}  // namespace wcoh

#endif
