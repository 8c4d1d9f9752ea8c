#ifndef WCOH_SIGNIFICANCE_HPP
#define WCOH_SIGNIFICANCE_HPP

#include <cstdint>
#include <vector>

#include "wcoh/ar1.hpp"
#include "wcoh/coherence.hpp"
#include "wcoh/config.hpp"

namespace wcoh {

// Null quantiles of the coherence estimator under independent AR(1)
// surrogates, and the resulting significance mask for one observed map.
struct SignificanceResult {
  SigMode mode = SigMode::per_scale;
  double level = 0.95;
  std::size_t nsims = 0;
  std::uint64_t seed = 0;
  std::vector<double> scale_threshold;  // per-scale mode
  Grid<double> cell_threshold;          // per-cell mode
  Grid<std::uint8_t> mask;              // observed > threshold
  double significant_coi_fraction = 0.0;

  double threshold_at(std::size_t j, std::size_t t) const;
};

// Cells with period < coi(t); estimates there are free of edge effects.
Grid<std::uint8_t> coi_interior_mask(const ScaleGrid& grid, const std::vector<double>& coi);

// Runs cfg.nsims replications of the identical pipeline (surrogate
// generation, the same transform as the data, CWT, wtc/pwc) and takes the
// per-scale (or per-cell) `level` quantile of the null values pooled over
// COI-interior columns. Deterministic for a given (config, seed) regardless
// of thread count: replication r draws from RNG substreams indexed by r.
SignificanceResult mc_threshold(const CoherenceMap& observed, const std::vector<Ar1Model>& models,
                                const AnalysisConfig& cfg);

// Copies the thresholds into the map for export.
void attach_significance(CoherenceMap& map, const SignificanceResult& sig);

// Fraction of COI-interior cells marked significant.
double significant_fraction(const CoherenceMap& map, const Grid<std::uint8_t>& mask);

}  // namespace wcoh

#endif
