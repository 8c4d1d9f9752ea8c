#include "wcoh/coherence.hpp"

#include <cmath>

#include "wcoh/errors.hpp"

namespace wcoh {

namespace {

void require_matching(const CwtMatrix& a, const CwtMatrix& b, const char* op) {
  if (!a.grid.same_layout(b.grid) || a.cols() != b.cols() || a.start != b.start)
    throw data_error(std::string(op) + ": transforms have mismatched grids or time axes");
}

CoherenceMap map_shell(MapKind kind, const CwtMatrix& wx, const SmoothingSpec& spec) {
  CoherenceMap map;
  map.kind = kind;
  map.grid = wx.grid;
  map.coi = wx.coi;
  map.start = wx.start;
  map.meta.smoothing = spec;
  return map;
}

// row-wise m/s, the 1/s weighting applied before smoothing
Grid<std::complex<double>> scale_weighted(const Grid<std::complex<double>>& m,
                                          const ScaleGrid& grid) {
  Grid<std::complex<double>> out(m.rows(), m.cols());
  for (std::size_t j = 0; j < m.rows(); ++j) {
    const double inv_s = 1.0 / grid.scales[j];
    for (std::size_t t = 0; t < m.cols(); ++t) out(j, t) = m(j, t) * inv_s;
  }
  return out;
}

Grid<double> scale_weighted_power(const CwtMatrix& w) {
  Grid<double> out(w.rows(), w.cols());
  for (std::size_t j = 0; j < w.rows(); ++j) {
    const double inv_s = 1.0 / w.grid.scales[j];
    for (std::size_t t = 0; t < w.cols(); ++t) out(j, t) = std::norm(w.coefficients(j, t)) * inv_s;
  }
  return out;
}

}  // namespace

const char* map_kind_name(MapKind kind) {
  switch (kind) {
    case MapKind::wtc: return "wtc";
    case MapKind::pwc: return "pwc";
    case MapKind::xwt_power: return "xwt_power";
  }
  return "wtc";
}

MapKind map_kind_from_name(const std::string& name) {
  if (name == "wtc") return MapKind::wtc;
  if (name == "pwc") return MapKind::pwc;
  if (name == "xwt_power") return MapKind::xwt_power;
  throw config_error("unknown map kind '" + name + "'");
}

double CoherenceMap::threshold_at(std::size_t j, std::size_t t) const {
  if (!cell_threshold.empty()) return cell_threshold(j, t);
  if (!scale_threshold.empty()) return scale_threshold[j];
  throw data_error("no significance threshold attached to this map");
}

CwtMatrix cross_transform(const CwtMatrix& wx, const CwtMatrix& wy) {
  require_matching(wx, wy, "cross_transform");
  CwtMatrix out;
  out.grid = wx.grid;
  out.coi = wx.coi;
  out.start = wx.start;
  out.source_names = {wx.source_names.front(), wy.source_names.front()};
  out.coefficients = Grid<std::complex<double>>(wx.rows(), wx.cols());
  for (std::size_t i = 0; i < out.coefficients.data().size(); ++i)
    out.coefficients.data()[i] = wx.coefficients.data()[i] * std::conj(wy.coefficients.data()[i]);
  return out;
}

Coherency coherency(const CwtMatrix& wx, const CwtMatrix& wy, const SmoothingSpec& spec) {
  require_matching(wx, wy, "coherency");
  const ScaleGrid& grid = wx.grid;

  const CwtMatrix cross = cross_transform(wx, wy);
  Coherency out;
  out.smoothed_cross = smooth_tf(scale_weighted(cross.coefficients, grid), grid, spec);
  const Grid<double> sx = smooth_tf(scale_weighted_power(wx), grid, spec);
  const Grid<double> sy = smooth_tf(scale_weighted_power(wy), grid, spec);

  const std::size_t rows = grid.count(), cols = grid.n;
  out.gamma = Grid<std::complex<double>>(rows, cols);
  out.masked = Grid<std::uint8_t>(rows, cols, 0);
  for (std::size_t j = 0; j < rows; ++j) {
    for (std::size_t t = 0; t < cols; ++t) {
      const double denom_sq = sx(j, t) * sy(j, t);
      if (denom_sq <= 0.0) {
        // Cauchy-Schwarz forces the numerator to vanish with the denominator;
        // report 0 and flag the cell instead of dividing 0/0.
        out.gamma(j, t) = 0.0;
        out.masked(j, t) = 1;
      } else {
        out.gamma(j, t) = out.smoothed_cross(j, t) / std::sqrt(denom_sq);
      }
    }
  }
  return out;
}

Grid<double> phase_difference(const Grid<std::complex<double>>& smoothed_cross) {
  Grid<double> out(smoothed_cross.rows(), smoothed_cross.cols());
  for (std::size_t i = 0; i < out.data().size(); ++i) {
    const std::complex<double>& z = smoothed_cross.data()[i];
    out.data()[i] = (z == std::complex<double>{0.0, 0.0}) ? 0.0 : std::atan2(z.imag(), z.real());
  }
  return out;
}

CoherenceMap wtc(const CwtMatrix& wx, const CwtMatrix& wy, const SmoothingSpec& spec) {
  spec.validate();
  const Coherency coh = coherency(wx, wy, spec);
  CoherenceMap map = map_shell(MapKind::wtc, wx, spec);
  map.source_names = {wx.source_names.front(), wy.source_names.front()};
  map.masked = coh.masked;
  map.phase = phase_difference(coh.smoothed_cross);
  map.values = Grid<double>(coh.gamma.rows(), coh.gamma.cols());
  for (std::size_t i = 0; i < map.values.data().size(); ++i)
    map.values.data()[i] = std::norm(coh.gamma.data()[i]);
  for (std::size_t i = 0; i < map.values.data().size(); ++i)
    if (coh.masked.data()[i]) map.phase.data()[i] = 0.0;
  return map;
}

CoherenceMap pwc(const CwtMatrix& wy, const CwtMatrix& wx1, const CwtMatrix& wx2,
                 const SmoothingSpec& spec) {
  spec.validate();
  require_matching(wy, wx1, "pwc");
  require_matching(wy, wx2, "pwc");

  const Coherency g_yx1 = coherency(wy, wx1, spec);
  const Coherency g_yx2 = coherency(wy, wx2, spec);
  const Coherency g_x2x1 = coherency(wx2, wx1, spec);

  CoherenceMap map = map_shell(MapKind::pwc, wy, spec);
  map.source_names = {wy.source_names.front(), wx1.source_names.front(),
                      wx2.source_names.front()};
  const std::size_t rows = map.grid.count(), cols = map.grid.n;
  map.values = Grid<double>(rows, cols);
  map.phase = phase_difference(g_yx1.smoothed_cross);
  map.masked = Grid<std::uint8_t>(rows, cols, 0);

  constexpr double degenerate = 1.0 - 1e-6;
  for (std::size_t j = 0; j < rows; ++j) {
    for (std::size_t t = 0; t < cols; ++t) {
      if (g_yx1.masked(j, t)) {
        map.masked(j, t) = 1;
        map.phase(j, t) = 0.0;
        continue;
      }
      // a masked confounder coherency means no measurable confounder power;
      // its gamma is 0 there and the formula reduces to plain coherence
      const std::complex<double> a = g_yx2.gamma(j, t);
      const std::complex<double> b = g_x2x1.gamma(j, t);
      const double a2 = std::min(std::norm(a), 1.0);
      const double b2 = std::min(std::norm(b), 1.0);
      if (std::sqrt(a2) >= degenerate || std::sqrt(b2) >= degenerate) {
        map.masked(j, t) = 1;
        map.phase(j, t) = 0.0;
        continue;
      }
      // residual projection under the Hermitian pairing <a,b> = S(W_a conj(W_b)):
      // <y_perp, x1_perp> = g_yx1 - g_yx2 * g_x2x1, which keeps |RP| <= 1
      // because the coherency matrix is positive semidefinite
      const std::complex<double> num = g_yx1.gamma(j, t) - a * b;
      double rp = std::norm(num) / ((1.0 - a2) * (1.0 - b2));
      // exceedances within 1e-9 are rounding noise and snap silently; only
      // larger ones count as clip events
      if (rp > 1.0) {
        if (rp > 1.0 + 1e-9) ++map.clip_count;
        rp = 1.0;
      } else if (rp < 0.0) {
        rp = 0.0;
        ++map.clip_count;
      }
      map.values(j, t) = rp;
    }
  }
  return map;
}

CoherenceMap xwt_power(const CwtMatrix& wx, const CwtMatrix& wy) {
  const CwtMatrix cross = cross_transform(wx, wy);
  CoherenceMap map = map_shell(MapKind::xwt_power, wx, SmoothingSpec{});
  map.source_names = cross.source_names;
  map.values = Grid<double>(cross.rows(), cross.cols());
  map.phase = Grid<double>(cross.rows(), cross.cols());
  map.masked = Grid<std::uint8_t>(cross.rows(), cross.cols(), 0);
  for (std::size_t i = 0; i < map.values.data().size(); ++i) {
    const std::complex<double>& z = cross.coefficients.data()[i];
    map.values.data()[i] = std::abs(z);
    map.phase.data()[i] =
        (z == std::complex<double>{0.0, 0.0}) ? 0.0 : std::atan2(z.imag(), z.real());
  }
  return map;
}

}  // namespace wcoh
