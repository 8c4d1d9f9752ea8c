#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "helpers.hpp"
#include "wcoh/cwt.hpp"
#include "wcoh/errors.hpp"
#include "wcoh/fft.hpp"

using namespace wcoh;
using wcoh::testing::ar1_series;
using wcoh::testing::cosine_series;

namespace {

// Direct O(N^2) Riemann-sum discretization of the CWT integral with the
// time-sampled Morlet, normalized to the same sqrt(2 pi s / dt) spectral
// convention as the FFT path. Independent oracle: no FFT anywhere.
Grid<std::complex<double>> direct_cwt(const TimeSeries& ts, const ScaleGrid& grid,
                                      double omega0) {
  const std::size_t n = ts.size();
  std::vector<double> x(ts.values);
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  for (double& v : x) v -= mean;

  Grid<std::complex<double>> w(grid.count(), n);
  const double norm = std::pow(std::numbers::pi, -0.25);
  for (std::size_t j = 0; j < grid.count(); ++j) {
    const double s = grid.scales[j];
    for (std::size_t u = 0; u < n; ++u) {
      std::complex<double> acc = 0.0;
      for (std::size_t t = 0; t < n; ++t) {
        const double eta = (static_cast<double>(t) - static_cast<double>(u)) * grid.dt / s;
        const std::complex<double> psi =
            norm * std::exp(std::complex<double>(-0.5 * eta * eta, omega0 * eta));
        acc += x[t] * std::conj(psi);
      }
      w(j, u) = acc * grid.dt / std::sqrt(s) / std::sqrt(grid.dt);
    }
  }
  return w;
}

}  // namespace

TEST_CASE("fft matches a naive dft and inverts exactly") {
  rng::Xoshiro256pp gen(rng::Stream{17, 0});
  for (std::size_t n : {16u, 64u}) {
    std::vector<std::complex<double>> x(n);
    for (auto& v : x) v = {gen.normal(), gen.normal()};

    std::vector<std::complex<double>> naive(n, 0.0);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t t = 0; t < n; ++t) {
        const double ang = -2.0 * std::numbers::pi * static_cast<double>(k * t) / n;
        naive[k] += x[t] * std::complex<double>(std::cos(ang), std::sin(ang));
      }

    std::vector<std::complex<double>> got(x);
    const FftPlan& plan = FftPlan::shared(n);
    plan.forward(got);
    for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(got[k] - naive[k]) < 1e-10);
    plan.inverse(got);
    for (std::size_t t = 0; t < n; ++t) CHECK(std::abs(got[t] - x[t]) < 1e-12);
  }
  CHECK_THROWS(FftPlan(12));
}

TEST_CASE("fourier factor at omega0 = 6") {
  CHECK(fourier_factor(WaveletSpec{6.0}) == doctest::Approx(1.0330).epsilon(1e-4));
  CHECK_THROWS_AS(WaveletSpec{4.0}.validate(), config_error);
}

TEST_CASE("morlet_fourier closed form") {
  const WaveletSpec spec{6.0};
  const double s = 8.0;
  const double peak = morlet_fourier(6.0 / s, s, spec);
  CHECK(peak == doctest::Approx(std::pow(std::numbers::pi, -0.25) *
                                std::sqrt(2.0 * std::numbers::pi * s)).epsilon(1e-12));
  CHECK(morlet_fourier(0.0, s, spec) == 0.0);
  CHECK(morlet_fourier(-1.0, s, spec) == 0.0);
  CHECK(morlet_fourier((6.0 + 3.0) / s, s, spec) ==
        doctest::Approx(peak * std::exp(-4.5)).epsilon(1e-12));
}

TEST_CASE("build_scale_grid") {
  SUBCASE("geometric ladder with exact sub-octave period ratio") {
    const ScaleGrid grid = build_scale_grid(1024, 1.0, 2.0, 1.0 / 12.0, 1.0);
    REQUIRE(grid.count() > 12);
    for (std::size_t j = 1; j < grid.count(); ++j)
      CHECK(grid.period(j) / grid.period(j - 1) ==
            doctest::Approx(std::exp2(1.0 / 12.0)).epsilon(1e-12));
    // J is maximal: one more scale would exceed the record
    CHECK(grid.period(grid.count() - 1) <= 1024.0);
    CHECK(grid.period(grid.count() - 1) * std::exp2(1.0 / 12.0) > 1024.0);
  }
  SUBCASE("no admissible scales") {
    CHECK_THROWS_AS(build_scale_grid(16, 1.0, 32.0, 1.0 / 12.0, 1.0), config_error);
  }
  SUBCASE("parameter validation") {
    CHECK_THROWS_AS(build_scale_grid(4, 1.0, 2.0, 1.0 / 12.0, 1.0), config_error);
    CHECK_THROWS_AS(build_scale_grid(64, 1.0, 0.5, 1.0 / 12.0, 1.0), config_error);
    CHECK_THROWS_AS(build_scale_grid(64, 1.0, 2.0, 0.0, 1.0), config_error);
    CHECK_THROWS_AS(build_scale_grid(64, 1.0, 2.0, 1.0 / 12.0, 1.5), config_error);
  }
}

TEST_CASE("cone of influence") {
  const std::size_t n = 1024;
  const double ff = fourier_factor(WaveletSpec{6.0});
  const std::vector<double> coi = cone_of_influence(n, 1.0, ff);
  CHECK(coi.front() == 0.0);
  CHECK(coi.back() == 0.0);
  CHECK(coi[511] == doctest::Approx(746.5).epsilon(1e-3));
  for (std::size_t t = 0; t < n; ++t) CHECK(coi[t] == coi[n - 1 - t]);
}

TEST_CASE("cwt basics") {
  const ScaleGrid grid = build_scale_grid(256, 1.0, 2.0, 1.0 / 12.0, 1.0);

  SUBCASE("zero series gives a zero matrix") {
    const TimeSeries zero = wcoh::testing::make_series("z", "2011-01-01",
                                                       std::vector<double>(256, 0.0));
    const CwtMatrix w = cwt_transform(zero, grid);
    for (const auto& c : w.coefficients.data()) CHECK(std::abs(c) == 0.0);
  }
  SUBCASE("scaling the input scales the coefficients") {
    const TimeSeries x = ar1_series(256, 0.6, 21);
    TimeSeries cx = x;
    for (auto& v : cx.values) v *= -2.5;
    const CwtMatrix wx = cwt_transform(x, grid);
    const CwtMatrix wcx = cwt_transform(cx, grid);
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < wx.coefficients.data().size(); ++i) {
      worst = std::max(worst,
                       std::abs(wcx.coefficients.data()[i] + 2.5 * wx.coefficients.data()[i]));
      scale = std::max(scale, std::abs(wx.coefficients.data()[i]));
    }
    CHECK(worst < 1e-10 * 2.5 * scale);
  }
  SUBCASE("linearity over a pair of inputs") {
    const TimeSeries x = ar1_series(256, 0.6, 22, "x");
    const TimeSeries y = ar1_series(256, 0.3, 23, "y");
    TimeSeries combo = x;
    for (std::size_t i = 0; i < combo.size(); ++i)
      combo.values[i] = 2.0 * x.values[i] - 3.0 * y.values[i];
    const CwtMatrix wx = cwt_transform(x, grid);
    const CwtMatrix wy = cwt_transform(y, grid);
    const CwtMatrix wc = cwt_transform(combo, grid);
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < wc.coefficients.data().size(); ++i) {
      const std::complex<double> expected =
          2.0 * wx.coefficients.data()[i] - 3.0 * wy.coefficients.data()[i];
      worst = std::max(worst, std::abs(wc.coefficients.data()[i] - expected));
      scale = std::max(scale, std::abs(expected));
    }
    CHECK(worst < 1e-10 * scale);
  }
  SUBCASE("length mismatch is an error") {
    const TimeSeries wrong = ar1_series(128, 0.5, 2);
    CHECK_THROWS_AS(cwt_transform(wrong, grid), data_error);
  }
}

TEST_CASE("morlet_fourier scales with dt") {
  const WaveletSpec spec{6.0};
  const double s = 16.0, dt = 0.25;
  CHECK(morlet_fourier(6.0 / s, s, spec, dt) ==
        doctest::Approx(std::pow(std::numbers::pi, -0.25) *
                        std::sqrt(2.0 * std::numbers::pi * s / dt)).epsilon(1e-12));
}

TEST_CASE("detrending removes a linear ramp") {
  const std::size_t n = 256;
  const ScaleGrid grid = build_scale_grid(n, 1.0, 2.0, 0.25, 1.0);
  std::vector<double> ramp(n);
  for (std::size_t i = 0; i < n; ++i) ramp[i] = 3.0 + 0.25 * static_cast<double>(i);
  const TimeSeries ts = wcoh::testing::make_series("ramp", "2011-01-01", ramp);

  const CwtMatrix detrended = cwt_transform(ts, grid, WaveletSpec{}, Padding::pow2, true);
  CHECK(detrended.detrended);
  double worst = 0.0;
  for (const auto& c : detrended.coefficients.data()) worst = std::max(worst, std::abs(c));
  CHECK(worst < 1e-9);  // a pure ramp has no oscillatory residual

  // without detrending the ramp leaks into the transform
  const CwtMatrix plain = cwt_transform(ts, grid);
  CHECK(plain.mean_removed == doctest::Approx(3.0 + 0.25 * 127.5));
  double leaked = 0.0;
  for (const auto& c : plain.coefficients.data()) leaked = std::max(leaked, std::abs(c));
  CHECK(leaked > 1.0);
}

TEST_CASE("frequency localization of a pure tone") {
  const std::size_t n = 1024;
  const ScaleGrid grid = build_scale_grid(n, 1.0, 2.0, 1.0 / 12.0, 1.0);
  for (const double period : {16.0, 32.0, 64.0, 128.0, 256.0}) {
    const CwtMatrix w = cwt_transform(cosine_series(n, period), grid);
    std::size_t best = 0;
    double best_power = -1.0;
    for (std::size_t j = 0; j < grid.count(); ++j) {
      double power = 0.0;
      for (std::size_t t = 0; t < n; ++t) power += std::norm(w.coefficients(j, t));
      if (power > best_power) {
        best_power = power;
        best = j;
      }
    }
    CHECK(std::abs(std::log2(grid.period(best) / period)) <= grid.dj);
  }
}

TEST_CASE("circular transform commutes with circular shifts") {
  const std::size_t n = 512;  // power of two, padding 'none' keeps the FFT circular
  const ScaleGrid grid = build_scale_grid(n, 1.0, 2.0, 1.0 / 8.0, 1.0);
  const TimeSeries x = ar1_series(n, 0.7, 31);
  const std::size_t shift = 137;
  TimeSeries shifted = x;
  for (std::size_t t = 0; t < n; ++t) shifted.values[(t + shift) % n] = x.values[t];

  const CwtMatrix wx = cwt_transform(x, grid, WaveletSpec{}, Padding::none);
  const CwtMatrix ws = cwt_transform(shifted, grid, WaveletSpec{}, Padding::none);
  double worst = 0.0;
  for (std::size_t j = 0; j < grid.count(); ++j)
    for (std::size_t t = 0; t < n; ++t)
      worst = std::max(worst,
                       std::abs(ws.coefficients(j, (t + shift) % n) - wx.coefficients(j, t)));
  CHECK(worst < 1e-9);
  CHECK_THROWS_AS(cwt_transform(ar1_series(300, 0.5, 1), build_scale_grid(300, 1.0, 2.0, 0.25, 1.0),
                                WaveletSpec{}, Padding::none),
                  config_error);
}

TEST_CASE("fft path matches the direct time-domain oracle inside the COI") {
  const std::size_t n = 128;
  // s0 = 4 dt keeps both representations of the wavelet band-limited well
  // below Nyquist; extended padding keeps wrap-around below the tolerance.
  const ScaleGrid grid = build_scale_grid(n, 1.0, 4.0, 1.0 / 6.0, 1.0);
  const TimeSeries x = ar1_series(n, 0.6, 41);
  const CwtMatrix fft_path = cwt_transform(x, grid, WaveletSpec{}, Padding::extended);
  const Grid<std::complex<double>> oracle = direct_cwt(x, grid, 6.0);

  double worst_inside = 0.0;
  for (std::size_t j = 0; j < grid.count(); ++j)
    for (std::size_t t = 0; t < n; ++t)
      if (grid.period(j) < fft_path.coi[t])
        worst_inside =
            std::max(worst_inside, std::abs(fft_path.coefficients(j, t) - oracle(j, t)));
  CHECK(worst_inside < 1e-6);
}
