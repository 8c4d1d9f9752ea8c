#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "helpers.hpp"
#include "wcoh/errors.hpp"
#include "wcoh/significance.hpp"

using namespace wcoh;
using wcoh::testing::ar1_series;

namespace {

AnalysisConfig quick_config(std::size_t nsims, std::uint64_t seed) {
  AnalysisConfig cfg;
  cfg.nsims = nsims;
  cfg.seed = seed;
  cfg.dj = 1.0 / 8.0;
  return cfg;
}

CoherenceMap observed_wtc(const TimeSeries& x, const TimeSeries& y, const AnalysisConfig& cfg) {
  const ScaleGrid grid =
      build_scale_grid(x.size(), 1.0, cfg.s0, cfg.dj, cfg.max_period_fraction, cfg.wavelet);
  const CwtMatrix wx = cwt_transform(x, grid, cfg.wavelet, cfg.padding);
  const CwtMatrix wy = cwt_transform(y, grid, cfg.wavelet, cfg.padding);
  return wtc(wx, wy, cfg.smoothing);
}

}  // namespace

TEST_CASE("fit_ar1") {
  SUBCASE("white noise fits phi near 0") {
    const Ar1Model m = fit_ar1(ar1_series(10000, 0.0, 100));
    CHECK(m.phi >= 0.0);
    CHECK(m.phi <= 0.03);
  }
  SUBCASE("recovers phi = 0.8") {
    const Ar1Model m = fit_ar1(ar1_series(10000, 0.8, 101));
    CHECK(std::abs(m.phi - 0.8) <= 0.03);
    // sigma^2 = var * (1 - phi^2): the implied stationary variance matches
    const double implied_var = m.sigma * m.sigma / (1.0 - m.phi * m.phi);
    CHECK(implied_var == doctest::Approx(1.0 / (1.0 - 0.64)).epsilon(0.1));
  }
  SUBCASE("negative autocorrelation clamps to 0") {
    std::vector<double> alt(64);
    for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = (i % 2 == 0) ? 1.0 : -1.0;
    const Ar1Model m = fit_ar1(wcoh::testing::make_series("alt", "2011-01-01", alt));
    CHECK(m.phi == 0.0);
  }
  SUBCASE("short series is an error") {
    CHECK_THROWS_AS(fit_ar1(wcoh::testing::make_series("s", "2011-01-01", {1, 2, 3})),
                    data_error);
  }
  SUBCASE("constant series is an error") {
    CHECK_THROWS_AS(fit_ar1(wcoh::testing::make_series("c", "2011-01-01",
                                                       std::vector<double>(32, 4.0))),
                    data_error);
  }
}

TEST_CASE("simulate_ar1") {
  SUBCASE("noise-free recursion decays geometrically") {
    const TimeSeries ts = simulate_ar1(Ar1Model{0.5, 0.0, 0.0}, 5, rng::Stream{1, 0}, 1.0);
    CHECK(ts.values == std::vector<double>{1.0, 0.5, 0.25, 0.125, 0.0625});
  }
  SUBCASE("same stream reproduces bit-identically, another stream differs") {
    const Ar1Model m{0.6, 1.0, 0.0};
    const TimeSeries a = simulate_ar1(m, 256, rng::Stream{42, 7});
    const TimeSeries b = simulate_ar1(m, 256, rng::Stream{42, 7});
    const TimeSeries c = simulate_ar1(m, 256, rng::Stream{42, 8});
    CHECK(a.values == b.values);
    CHECK(a.values != c.values);
  }
  SUBCASE("simulated autocorrelation matches phi") {
    const TimeSeries ts = simulate_ar1(Ar1Model{0.8, 1.0, 0.0}, 100000, rng::Stream{5, 0});
    double d0 = 0.0, d1 = 0.0, mean = 0.0;
    for (double v : ts.values) mean += v;
    mean /= static_cast<double>(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const double di = ts.values[i] - mean;
      d0 += di * di;
      if (i > 0) d1 += di * (ts.values[i - 1] - mean);
    }
    CHECK(d1 / d0 == doctest::Approx(0.8).epsilon(0.0125));
  }
}

TEST_CASE("simulate_ar1 rejects tiny n and bad models") {
  CHECK_THROWS_AS(simulate_ar1(Ar1Model{0.5, 1.0, 0.0}, 1, rng::Stream{1, 0}), config_error);
  CHECK_THROWS_AS(simulate_ar1(Ar1Model{1.2, 1.0, 0.0}, 16, rng::Stream{1, 0}), config_error);
}

TEST_CASE("mc_threshold input validation") {
  const AnalysisConfig cfg = quick_config(120, 9);
  const TimeSeries x = quantile_transform(ar1_series(128, 0.5, 1, "x"));
  const TimeSeries y = quantile_transform(ar1_series(128, 0.5, 2, "y"));
  const CoherenceMap map = observed_wtc(x, y, cfg);
  const std::vector<Ar1Model> two = {fit_ar1(x), fit_ar1(y)};

  AnalysisConfig small = cfg;
  small.nsims = 50;
  CHECK_THROWS_AS(mc_threshold(map, two, small), config_error);
  CHECK_THROWS_WITH_AS(mc_threshold(map, {two[0]}, cfg), doctest::Contains("needs 2"),
                       config_error);
  CHECK_THROWS_WITH_AS(mc_threshold(map, {two[0], two[1], two[0]}, cfg),
                       doctest::Contains("needs 2"), config_error);
}

TEST_CASE("perfect dependence is significant everywhere inside the COI") {
  const AnalysisConfig cfg = quick_config(120, 10);
  const TimeSeries x = quantile_transform(ar1_series(256, 0.7, 3, "x"));
  const CoherenceMap map = observed_wtc(x, x, cfg);
  const SignificanceResult sig = mc_threshold(map, {fit_ar1(x), fit_ar1(x)}, cfg);
  CHECK(sig.significant_coi_fraction == 1.0);
  for (double thr : sig.scale_threshold) {
    CHECK(thr >= 0.0);
    CHECK(thr <= 1.0);
  }
}

TEST_CASE("threshold determinism is independent of thread count") {
  const AnalysisConfig cfg = quick_config(100, 4242);
  const TimeSeries x = quantile_transform(ar1_series(128, 0.6, 5, "x"));
  const TimeSeries y = quantile_transform(ar1_series(128, 0.4, 6, "y"));
  const CoherenceMap map = observed_wtc(x, y, cfg);
  const std::vector<Ar1Model> models = {fit_ar1(x), fit_ar1(y)};

#ifdef _OPENMP
  omp_set_num_threads(1);
#endif
  const SignificanceResult one = mc_threshold(map, models, cfg);
#ifdef _OPENMP
  omp_set_num_threads(2);
#endif
  const SignificanceResult two = mc_threshold(map, models, cfg);
  CHECK(one.scale_threshold == two.scale_threshold);  // bitwise
  CHECK(one.mask == two.mask);
  CHECK(one.significant_coi_fraction == two.significant_coi_fraction);
}

TEST_CASE("raising the level never adds significant cells, doubling nsims is stable") {
  AnalysisConfig cfg = quick_config(100, 77);
  const TimeSeries x = quantile_transform(ar1_series(192, 0.6, 7, "x"));
  const TimeSeries y = quantile_transform(ar1_series(192, 0.5, 8, "y"));
  const CoherenceMap map = observed_wtc(x, y, cfg);
  const std::vector<Ar1Model> models = {fit_ar1(x), fit_ar1(y)};

  const SignificanceResult at95 = mc_threshold(map, models, cfg);
  cfg.significance_level = 0.99;
  const SignificanceResult at99 = mc_threshold(map, models, cfg);
  std::size_t n95 = 0, n99 = 0;
  for (std::size_t i = 0; i < at95.mask.data().size(); ++i) {
    n95 += at95.mask.data()[i];
    n99 += at99.mask.data()[i];
  }
  CHECK(n99 <= n95);
  for (std::size_t j = 0; j < at95.scale_threshold.size(); ++j)
    CHECK(at99.scale_threshold[j] >= at95.scale_threshold[j]);

  cfg.significance_level = 0.95;
  cfg.nsims = 200;
  const SignificanceResult doubled = mc_threshold(map, models, cfg);
  for (std::size_t j = 0; j < at95.scale_threshold.size(); ++j)
    CHECK(std::abs(doubled.scale_threshold[j] - at95.scale_threshold[j]) < 0.05);
}

TEST_CASE("per-cell mode produces a full threshold grid") {
  AnalysisConfig cfg = quick_config(100, 31);
  cfg.significance_mode = SigMode::per_cell;
  const TimeSeries x = quantile_transform(ar1_series(128, 0.5, 9, "x"));
  const TimeSeries y = quantile_transform(ar1_series(128, 0.5, 10, "y"));
  const CoherenceMap map = observed_wtc(x, y, cfg);
  const SignificanceResult sig = mc_threshold(map, {fit_ar1(x), fit_ar1(y)}, cfg);
  CHECK(sig.cell_threshold.rows() == map.rows());
  CHECK(sig.cell_threshold.cols() == map.cols());
  for (double v : sig.cell_threshold.data()) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  CHECK(sig.scale_threshold.empty());
}

TEST_CASE("null calibration sanity at reduced size") {
  // The strict nsims=300 calibration lives in the acceptance suite; this is
  // a faster sanity check of the same machinery.
  const AnalysisConfig cfg = quick_config(120, 99);
  const TimeSeries x = quantile_transform(ar1_series(256, 0.8, 11, "x"));
  const TimeSeries y = quantile_transform(ar1_series(256, 0.6, 12, "y"));
  const CoherenceMap map = observed_wtc(x, y, cfg);
  const SignificanceResult sig = mc_threshold(map, {fit_ar1(x), fit_ar1(y)}, cfg);
  CHECK(sig.significant_coi_fraction >= 0.005);
  CHECK(sig.significant_coi_fraction <= 0.12);
}
