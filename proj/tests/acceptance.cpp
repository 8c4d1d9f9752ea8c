// Acceptance suite: runs every criterion at its pinned tolerance and prints
// one [PASS]/[FAIL] line per criterion. Exits nonzero if any criterion fails.
// Criterion 12 needs user-supplied data snapshots (WCOH_SNAPSHOT_DIR) and is
// reported as [SKIP] when they are absent.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <vector>

#include "helpers.hpp"
#include "wcoh/grid_io.hpp"
#include "wcoh/pipeline.hpp"
#include "wcoh/significance.hpp"

using namespace wcoh;
using wcoh::testing::ar1_series;
using wcoh::testing::cosine_series;
using wcoh::testing::TempDir;

namespace {

int g_failures = 0;

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void require(bool condition, const std::string& what) {
    if (!condition) {
      ok = false;
      detail << (detail.str().empty() ? "" : "; ") << what;
    }
  }
};

void run_criterion(int id, const std::string& name, const std::function<void(Check&)>& body) {
  Check check;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(check);
  } catch (const std::exception& e) {
    check.ok = false;
    check.detail << "exception: " << e.what();
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::ostringstream line;
  line << (check.ok ? "[PASS]" : "[FAIL]") << " criterion " << id << ": " << name << " ("
       << std::fixed;
  line.precision(1);
  line << seconds << " s)";
  if (!check.ok) {
    line << " -- " << check.detail.str();
    ++g_failures;
  }
  std::cout << line.str() << std::endl;
}

void skip_criterion(int id, const std::string& name, const std::string& why) {
  std::cout << "[SKIP] criterion " << id << ": " << name << " -- " << why << std::endl;
}

ScaleGrid default_grid(std::size_t n, double dj = 1.0 / 12.0, double s0 = 2.0) {
  return build_scale_grid(n, 1.0, s0, dj, 1.0);
}

CwtMatrix transform_of(const TimeSeries& ts, const ScaleGrid& grid,
                       Padding padding = Padding::pow2) {
  return cwt_transform(ts, grid, WaveletSpec{}, padding);
}

std::size_t ridge_row(const ScaleGrid& grid, double period) {
  std::size_t best = 0;
  double dist = 1e300;
  for (std::size_t j = 0; j < grid.count(); ++j) {
    const double d = std::abs(std::log2(grid.period(j) / period));
    if (d < dist) {
      dist = d;
      best = j;
    }
  }
  return best;
}

double median(std::vector<double> v) {
  std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
  return v[v.size() / 2];
}

TimeSeries heavy_tailed_series(std::size_t n, std::uint64_t seed) {
  rng::Xoshiro256pp gen(rng::Stream{seed, 3});
  std::vector<double> v(n);
  for (auto& x : v) {
    const double u = gen.uniform01();
    x = std::tan(std::numbers::pi * (std::min(u, 0.999999) - 0.5));  // Cauchy draw
  }
  return wcoh::testing::make_series("heavy", "2011-09-14", std::move(v));
}

// ------------------------------------------------------------------ criteria

void criterion_1_self_coherence(Check& check) {
  const std::size_t n = 1024;
  const TimeSeries x = ar1_series(n, 0.72, 1001);
  const ScaleGrid grid = default_grid(n);
  const CwtMatrix wx = transform_of(x, grid);
  const CoherenceMap map = wtc(wx, wx);
  double worst_v = 0.0, worst_p = 0.0;
  for (double v : map.values.data()) worst_v = std::max(worst_v, std::abs(v - 1.0));
  for (double p : map.phase.data()) worst_p = std::max(worst_p, std::abs(p));
  check.require(worst_v <= 1e-8, "max |wtc - 1| = " + std::to_string(worst_v));
  check.require(worst_p <= 1e-8, "max |phase| = " + std::to_string(worst_p));
}

void criterion_2_boundedness(Check& check) {
  const std::size_t n = 256;
  const ScaleGrid grid = default_grid(n);
  double worst = 0.0;
  for (std::uint64_t pair = 0; pair < 50; ++pair) {
    auto make = [&](std::uint64_t which, std::uint64_t seed) -> TimeSeries {
      switch (which % 3) {
        case 0: return ar1_series(n, 0.3 + 0.2 * static_cast<double>(seed % 4), seed);
        case 1:
          return cosine_series(n, 12.0 + static_cast<double>(seed % 80), 0.0, 0.3, seed);
        default: return heavy_tailed_series(n, seed);
      }
    };
    const CwtMatrix wx = transform_of(make(pair, 2000 + pair), grid);
    const CwtMatrix wy = transform_of(make(pair + 1, 3000 + pair), grid);
    const CoherenceMap map = wtc(wx, wy);
    for (double v : map.values.data()) worst = std::max(worst, v);
  }
  check.require(worst <= 1.0 + 1e-9, "max wtc = " + std::to_string(worst));
}

void criterion_3_cwt_oracle(Check& check) {
  const std::size_t n = 128;
  const ScaleGrid grid = build_scale_grid(n, 1.0, 4.0, 1.0 / 6.0, 1.0);
  const TimeSeries x = ar1_series(n, 0.6, 1003);
  const CwtMatrix fft_path = transform_of(x, grid, Padding::extended);

  // direct O(N^2) Riemann sum of the transform integral
  std::vector<double> centered(x.values);
  double mean = 0.0;
  for (double v : centered) mean += v;
  mean /= static_cast<double>(n);
  for (double& v : centered) v -= mean;
  const double norm = std::pow(std::numbers::pi, -0.25);
  double worst = 0.0;
  for (std::size_t j = 0; j < grid.count(); ++j) {
    const double s = grid.scales[j];
    for (std::size_t u = 0; u < n; ++u) {
      if (grid.period(j) >= fft_path.coi[u]) continue;
      std::complex<double> acc = 0.0;
      for (std::size_t t = 0; t < n; ++t) {
        const double eta = (static_cast<double>(t) - static_cast<double>(u)) / s;
        acc += centered[t] *
               std::conj(norm * std::exp(std::complex<double>(-0.5 * eta * eta, 6.0 * eta)));
      }
      worst = std::max(worst, std::abs(fft_path.coefficients(j, u) - acc / std::sqrt(s)));
    }
  }
  check.require(worst < 1e-6, "max |fft - direct| inside COI = " + std::to_string(worst));
}

void criterion_4_localization(Check& check) {
  const std::size_t n = 1024;
  const ScaleGrid grid = default_grid(n);
  const CwtMatrix w = transform_of(cosine_series(n, 64.0), grid);
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
  const double off = std::abs(std::log2(grid.fourier_factor * grid.scales[best] / 64.0));
  check.require(off <= grid.dj, "|log2(ff*s/64)| = " + std::to_string(off));
}

void criterion_5_phase_recovery(Check& check) {
  for (const std::size_t n : {std::size_t{512}, std::size_t{1024}}) {
    const ScaleGrid grid = default_grid(n);
    const TimeSeries x = cosine_series(n, 64.0, 0.0, 0.0, 1, "x");
    const TimeSeries y = cosine_series(n, 64.0, 16.0, 0.0, 2, "y");  // x leads by P/4
    const CoherenceMap map = wtc(transform_of(x, grid), transform_of(y, grid));
    const std::size_t j = ridge_row(grid, 64.0);
    const Grid<std::uint8_t> interior = coi_interior_mask(grid, map.coi);
    std::vector<double> phases;
    for (std::size_t t = 0; t < n; ++t)
      if (interior(j, t)) phases.push_back(map.phase(j, t));
    const double ridge_phase = median(phases);

    // independent sign oracle: analytic pair correlation turns the delay
    // into arg sum_t e^{iwt} conj(e^{iw(t-16)}) = +pi/2
    std::complex<double> acc = 0.0;
    const double omega = 2.0 * std::numbers::pi / 64.0;
    for (std::size_t t = 0; t < n; ++t)
      acc += std::exp(std::complex<double>(0.0, omega * static_cast<double>(t))) *
             std::conj(std::exp(std::complex<double>(0.0, omega * (static_cast<double>(t) - 16.0))));
    const double oracle = std::atan2(acc.imag(), acc.real());

    check.require(std::abs(ridge_phase - std::numbers::pi / 2) <= 0.15,
                  "N=" + std::to_string(n) + " ridge phase = " + std::to_string(ridge_phase));
    check.require(ridge_phase * oracle > 0.0, "sign disagrees with the direct oracle");
  }
}

void criterion_6_calibration(Check& check) {
  const std::size_t n = 512;
  AnalysisConfig cfg;
  cfg.nsims = 300;
  cfg.seed = 1812;
  const TimeSeries x = quantile_transform(ar1_series(n, 0.8, 1006, "x"));
  const TimeSeries y = quantile_transform(ar1_series(n, 0.6, 1007, "y"));
  const ScaleGrid grid = default_grid(n);
  const CoherenceMap map = wtc(transform_of(x, grid), transform_of(y, grid));
  const SignificanceResult sig = mc_threshold(map, {fit_ar1(x), fit_ar1(y)}, cfg);
  check.require(sig.significant_coi_fraction >= 0.025 && sig.significant_coi_fraction <= 0.075,
                "significant COI fraction = " + std::to_string(sig.significant_coi_fraction));
}

void criterion_7_pwc_confound_removal(Check& check) {
  const std::size_t n = 512;
  AnalysisConfig cfg;
  cfg.nsims = 300;
  cfg.seed = 1905;
  rng::Xoshiro256pp gen(rng::Stream{1905, 9});
  TimeSeries driver = ar1_series(n, 0.9, 1008, "x2");
  TimeSeries y = driver, x1 = driver;
  y.name = "y";
  x1.name = "x1";
  for (auto& v : y.values) v += 0.3 * gen.normal();
  for (auto& v : x1.values) v += 0.3 * gen.normal();

  const TimeSeries yq = quantile_transform(y);
  const TimeSeries x1q = quantile_transform(x1);
  const TimeSeries x2q = quantile_transform(driver);
  const ScaleGrid grid = default_grid(n);
  const CwtMatrix wy = transform_of(yq, grid);
  const CwtMatrix wx1 = transform_of(x1q, grid);
  const CwtMatrix wx2 = transform_of(x2q, grid);

  const CoherenceMap plain = wtc(wy, wx1);
  const Grid<std::uint8_t> interior = coi_interior_mask(grid, plain.coi);
  double ridge = 0.0;
  for (std::size_t j = 0; j < grid.count(); ++j) {
    std::vector<double> vals;
    for (std::size_t t = 0; t < n; ++t)
      if (interior(j, t)) vals.push_back(plain.values(j, t));
    if (!vals.empty()) ridge = std::max(ridge, median(vals));
  }
  check.require(ridge > 0.8, "wtc ridge = " + std::to_string(ridge));

  const CoherenceMap partial = pwc(wy, wx1, wx2);
  const SignificanceResult sig =
      mc_threshold(partial, {fit_ar1(yq), fit_ar1(x1q), fit_ar1(x2q)}, cfg);
  std::size_t below = 0, total = 0;
  for (std::size_t j = 0; j < grid.count(); ++j)
    for (std::size_t t = 0; t < n; ++t)
      if (interior(j, t)) {
        ++total;
        if (!sig.mask(j, t)) ++below;
      }
  const double fraction = static_cast<double>(below) / static_cast<double>(total);
  check.require(fraction > 0.9,
                "pwc below the null threshold on " + std::to_string(fraction) + " of cells");
}

void criterion_8_pwc_reduction(Check& check) {
  const std::size_t n = 512;
  const ScaleGrid grid = default_grid(n);
  const CwtMatrix wy = transform_of(ar1_series(n, 0.7, 1010, "y"), grid);
  const CwtMatrix wx1 = transform_of(ar1_series(n, 0.5, 1011, "x1"), grid);
  CwtMatrix zero = wx1;
  zero.source_names = {"zero"};
  for (auto& c : zero.coefficients.data()) c = 0.0;
  const CoherenceMap partial = pwc(wy, wx1, zero);
  const CoherenceMap plain = wtc(wy, wx1);
  double worst = 0.0;
  for (std::size_t i = 0; i < plain.values.data().size(); ++i)
    worst = std::max(worst, std::abs(partial.values.data()[i] - plain.values.data()[i]));
  check.require(worst <= 1e-10, "max |pwc - wtc| = " + std::to_string(worst));
}

void criterion_9_trends_chaining(Check& check) {
  std::vector<double> truth(240);
  rng::Xoshiro256pp gen(rng::Stream{1012, 0});
  for (auto& v : truth) v = 20.0 + 10.0 * gen.uniform01();
  auto block = [&](int offset, int len, double scale) {
    TrendsBlock b{Date::parse("2012-01-01") + offset, 1.0, {}};
    for (int i = 0; i < len; ++i) b.values.push_back(scale * truth[offset + i]);
    return b;
  };
  const TimeSeries chained = chain_trends_blocks(
      {block(0, 90, 3.7), block(60, 90, 0.04), block(120, 120, 12.0)}, 30);
  check.require(chained.size() == truth.size(),
                "chained length " + std::to_string(chained.size()));
  double worst = 0.0;
  for (std::size_t i = 0; i < chained.size(); ++i)
    worst = std::max(worst, std::abs(chained.values[i] / (3.7 * truth[i]) - 1.0));
  check.require(worst < 1e-9, "max relative deviation = " + std::to_string(worst));
}

void criterion_10_quantile_transform(Check& check) {
  const std::size_t n = 899;
  const TimeSeries x = ar1_series(n, 0.85, 1013);
  std::vector<double> q = quantile_transform(x).values;
  std::vector<double> sorted(q);
  std::sort(sorted.begin(), sorted.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i)
    worst = std::max(worst, std::abs(static_cast<double>(i + 1) / static_cast<double>(n) -
                                     sorted[i]));
  check.require(worst < 2.0 / static_cast<double>(n),
                "max CDF deviation = " + std::to_string(worst));

  TimeSeries mapped = x;
  for (auto& v : mapped.values) v = std::exp(v) + 3.0 * std::atan(v);
  check.require(quantile_transform(mapped).values == q,
                "not invariant under a strictly increasing map");
}

void criterion_11_determinism(Check& check) {
  TempDir tmp("acceptance_det");
  const TimeSeries x = ar1_series(384, 0.8, 1014, "x");
  const TimeSeries y = ar1_series(384, 0.55, 1015, "y");
  wcoh::testing::write_series_csv(tmp / "x.csv", x);
  wcoh::testing::write_series_csv(tmp / "y.csv", y);
  AnalysisConfig cfg;
  cfg.nsims = 150;
  cfg.seed = 99;
  cfg.dj = 1.0 / 10.0;
  run_pair(tmp / "x.csv", tmp / "y.csv", cfg, tmp / "a", "det");
  run_pair(tmp / "x.csv", tmp / "y.csv", cfg, tmp / "b", "det");
  for (const char* name : {"map.csv", "map.json", "map.svg", "significance.json"}) {
    const auto lhs = wcoh::testing::read_file(tmp.path() / "a" / "det" / name);
    const auto rhs = wcoh::testing::read_file(tmp.path() / "b" / "det" / name);
    check.require(!lhs.empty() && lhs == rhs, std::string(name) + " differs between runs");
  }
}

}  // namespace

int main() {
  std::cout << "wcoh acceptance suite" << std::endl;
  run_criterion(1, "self-coherence: wtc(x,x) = 1 within 1e-8, phase 0 within 1e-8",
                criterion_1_self_coherence);
  run_criterion(2, "boundedness: max wtc <= 1 + 1e-9 over 50 mixed random pairs",
                criterion_2_boundedness);
  run_criterion(3, "cwt oracle equivalence on N=128 within 1e-6 inside the COI",
                criterion_3_cwt_oracle);
  run_criterion(4, "frequency localization of a period-64 tone within one sub-octave",
                criterion_4_localization);
  run_criterion(5, "phase recovery: quarter-period lead = +pi/2 +/- 0.15, oracle-signed",
                criterion_5_phase_recovery);
  run_criterion(6, "significance calibration: null COI fraction in [2.5%, 7.5%] at nsims=300",
                criterion_6_calibration);
  run_criterion(7, "pwc removes a common driver below the 95% null on > 90% of cells",
                criterion_7_pwc_confound_removal);
  run_criterion(8, "pwc with a zero confounder equals wtc within 1e-10",
                criterion_8_pwc_reduction);
  run_criterion(9, "trends chaining is proportional to ground truth within 1e-9",
                criterion_9_trends_chaining);
  run_criterion(10, "quantile transform: uniform CDF within 2/N, monotone-map invariant",
                criterion_10_quantile_transform);
  run_criterion(11, "determinism: identical runs produce bit-identical outputs",
                criterion_11_determinism);

  const char* snapshot_dir = std::getenv("WCOH_SNAPSHOT_DIR");
  if (snapshot_dir == nullptr) {
    skip_criterion(12, "qualitative replication on a user-supplied snapshot",
                   "set WCOH_SNAPSHOT_DIR to a directory with bpi.csv and "
                   "search_interest.csv (optional in CI)");
  } else {
    run_criterion(12, "qualitative replication: long-period significant co-movement",
                  [&](Check& check) {
                    AnalysisConfig cfg;
                    cfg.nsims = 300;
                    cfg.seed = 7;
                    const std::string dir = snapshot_dir;
                    TimeSeries bpi =
                        load_csv(dir + "/bpi.csv", "date", "value", FillPolicy::forward);
                    TimeSeries interest = load_csv(dir + "/search_interest.csv", "date", "value",
                                                   FillPolicy::forward);
                    auto [x, y] = align_intersect(bpi, interest);
                    x = quantile_transform(x);
                    y = quantile_transform(y);
                    const ScaleGrid grid = default_grid(x.size());
                    const CoherenceMap map = wtc(transform_of(x, grid), transform_of(y, grid));
                    const SignificanceResult sig =
                        mc_threshold(map, {fit_ar1(x), fit_ar1(y)}, cfg);
                    const Grid<std::uint8_t> interior = coi_interior_mask(grid, map.coi);
                    std::size_t width = 0, spanned = 0;
                    for (std::size_t t = 0; t < map.cols(); ++t) {
                      bool any_interior = false, any_significant = false;
                      for (std::size_t j = 0; j < map.rows(); ++j) {
                        if (grid.period(j) <= 64.0 || !interior(j, t)) continue;
                        any_interior = true;
                        if (sig.mask(j, t)) any_significant = true;
                      }
                      width += any_interior;
                      spanned += any_significant;
                    }
                    check.require(width > 0, "no COI-interior cells above period 64");
                    const double coverage =
                        width ? static_cast<double>(spanned) / static_cast<double>(width) : 0.0;
                    check.require(coverage >= 0.5,
                                  "long-period significant span = " + std::to_string(coverage));
                  });
  }

  std::cout << (g_failures == 0 ? "all criteria passed" : std::to_string(g_failures) +
                " criterion(s) failed")
            << std::endl;
  return g_failures == 0 ? 0 : 1;
}
