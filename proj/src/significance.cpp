#include "wcoh/significance.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "wcoh/errors.hpp"

namespace wcoh {

namespace {

constexpr std::size_t kBins = 32768;  // pooled-quantile resolution 1/32768

std::size_t bin_of(double value) {
  const auto b = static_cast<std::int64_t>(value * static_cast<double>(kBins));
  return static_cast<std::size_t>(std::clamp<std::int64_t>(b, 0, kBins - 1));
}

CoherenceMap null_map(const CoherenceMap& observed, const std::vector<Ar1Model>& models,
                      const AnalysisConfig& cfg, std::size_t rep) {
  const std::size_t k = models.size();
  std::vector<CwtMatrix> w;
  w.reserve(k);
  for (std::size_t m = 0; m < k; ++m) {
    TimeSeries sim = simulate_ar1(models[m], observed.grid.n,
                                  rng::Stream{cfg.seed, rep * k + m});
    if (cfg.transform == TransformKind::quantile) sim = quantile_transform(sim);
    w.push_back(cwt_transform(sim, observed.grid, cfg.wavelet, cfg.padding, cfg.detrend));
  }
  return observed.kind == MapKind::pwc ? pwc(w[0], w[1], w[2], observed.meta.smoothing)
                                       : wtc(w[0], w[1], observed.meta.smoothing);
}

}  // namespace

double SignificanceResult::threshold_at(std::size_t j, std::size_t t) const {
  return mode == SigMode::per_cell ? cell_threshold(j, t) : scale_threshold[j];
}

Grid<std::uint8_t> coi_interior_mask(const ScaleGrid& grid, const std::vector<double>& coi) {
  Grid<std::uint8_t> interior(grid.count(), grid.n, 0);
  for (std::size_t j = 0; j < grid.count(); ++j) {
    const double period = grid.period(j);
    for (std::size_t t = 0; t < grid.n; ++t)
      if (period < coi[t]) interior(j, t) = 1;
  }
  return interior;
}

SignificanceResult mc_threshold(const CoherenceMap& observed, const std::vector<Ar1Model>& models,
                                const AnalysisConfig& cfg) {
  cfg.validate();
  if (observed.kind == MapKind::xwt_power)
    throw config_error("mc_threshold supports wtc and pwc maps only");
  const std::size_t expected = observed.kind == MapKind::pwc ? 3 : 2;
  if (models.size() != expected)
    throw config_error("mc_threshold: " + std::string(map_kind_name(observed.kind)) +
                       " map needs " + std::to_string(expected) + " AR(1) models, got " +
                       std::to_string(models.size()));
  for (const auto& m : models) m.validate();

  const std::size_t rows = observed.rows(), cols = observed.cols();
  const Grid<std::uint8_t> interior = coi_interior_mask(observed.grid, observed.coi);
  const std::size_t nsims = cfg.nsims;

  SignificanceResult result;
  result.mode = cfg.significance_mode;
  result.level = cfg.significance_level;
  result.nsims = nsims;
  result.seed = cfg.seed;

  if (cfg.significance_mode == SigMode::per_scale) {
    std::vector<std::vector<std::uint32_t>> hist(rows, std::vector<std::uint32_t>(kBins, 0));
#ifdef _OPENMP
#pragma omp parallel
    {
      std::vector<std::vector<std::uint32_t>> local(rows, std::vector<std::uint32_t>(kBins, 0));
#pragma omp for schedule(dynamic)
      for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(nsims); ++r) {
        const CoherenceMap nm = null_map(observed, models, cfg, static_cast<std::size_t>(r));
        for (std::size_t j = 0; j < rows; ++j)
          for (std::size_t t = 0; t < cols; ++t)
            if (interior(j, t) && !nm.masked(j, t)) ++local[j][bin_of(nm.values(j, t))];
      }
#pragma omp critical
      for (std::size_t j = 0; j < rows; ++j)
        for (std::size_t b = 0; b < kBins; ++b) hist[j][b] += local[j][b];
    }
#else
    for (std::size_t r = 0; r < nsims; ++r) {
      const CoherenceMap nm = null_map(observed, models, cfg, r);
      for (std::size_t j = 0; j < rows; ++j)
        for (std::size_t t = 0; t < cols; ++t)
          if (interior(j, t) && !nm.masked(j, t)) ++hist[j][bin_of(nm.values(j, t))];
    }
#endif
    result.scale_threshold.assign(rows, 1.0);
    for (std::size_t j = 0; j < rows; ++j) {
      std::uint64_t total = 0;
      for (auto c : hist[j]) total += c;
      if (total == 0) continue;  // no interior cells at this scale
      const auto rank = static_cast<std::uint64_t>(
          std::ceil(cfg.significance_level * static_cast<double>(total)));
      std::uint64_t cum = 0;
      for (std::size_t b = 0; b < kBins; ++b) {
        cum += hist[j][b];
        if (cum >= rank) {
          result.scale_threshold[j] =
              std::min(1.0, static_cast<double>(b + 1) / static_cast<double>(kBins));
          break;
        }
      }
    }
  } else {
    // per-cell: store every null value quantized to 16 bits
    const std::size_t cells = rows * cols;
    std::vector<std::uint16_t> nulls(nsims * cells);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(nsims); ++r) {
      const CoherenceMap nm = null_map(observed, models, cfg, static_cast<std::size_t>(r));
      std::uint16_t* slot = nulls.data() + static_cast<std::size_t>(r) * cells;
      for (std::size_t i = 0; i < cells; ++i)
        slot[i] = static_cast<std::uint16_t>(std::clamp(
            nm.values.data()[i] * 65536.0, 0.0, 65535.0));
    }
    result.cell_threshold = Grid<double>(rows, cols, 1.0);
    const auto rank = static_cast<std::size_t>(
        std::ceil(cfg.significance_level * static_cast<double>(nsims)));
    std::vector<std::uint16_t> column(nsims);
    for (std::size_t i = 0; i < cells; ++i) {
      for (std::size_t r = 0; r < nsims; ++r) column[r] = nulls[r * cells + i];
      std::nth_element(column.begin(), column.begin() + (rank - 1), column.end());
      result.cell_threshold.data()[i] =
          std::min(1.0, static_cast<double>(column[rank - 1] + 1) / 65536.0);
    }
  }

  result.mask = Grid<std::uint8_t>(rows, cols, 0);
  std::size_t sig_interior = 0, n_interior = 0;
  for (std::size_t j = 0; j < rows; ++j) {
    for (std::size_t t = 0; t < cols; ++t) {
      if (!observed.masked(j, t) && observed.values(j, t) > result.threshold_at(j, t))
        result.mask(j, t) = 1;
      if (interior(j, t)) {
        ++n_interior;
        if (result.mask(j, t)) ++sig_interior;
      }
    }
  }
  result.significant_coi_fraction =
      n_interior ? static_cast<double>(sig_interior) / static_cast<double>(n_interior) : 0.0;
  return result;
}

void attach_significance(CoherenceMap& map, const SignificanceResult& sig) {
  if (!sig.mask.same_shape(map.rows(), map.cols()))
    throw data_error("attach_significance: mask shape does not match map");
  map.scale_threshold = sig.scale_threshold;
  map.cell_threshold = sig.cell_threshold;
}

double significant_fraction(const CoherenceMap& map, const Grid<std::uint8_t>& mask) {
  const Grid<std::uint8_t> interior = coi_interior_mask(map.grid, map.coi);
  std::size_t sig = 0, total = 0;
  for (std::size_t i = 0; i < interior.data().size(); ++i) {
    if (interior.data()[i]) {
      ++total;
      if (mask.data()[i]) ++sig;
    }
  }
  return total ? static_cast<double>(sig) / static_cast<double>(total) : 0.0;
}

}  // namespace wcoh
