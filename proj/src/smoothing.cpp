#include "wcoh/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "wcoh/errors.hpp"
#include "wcoh/fft.hpp"

namespace wcoh {

void SmoothingSpec::validate() const {
  if (!(time_bandwidth > 0.0))
    throw config_error("time_bandwidth must be positive, got " + std::to_string(time_bandwidth));
  if (!(scale_octaves > 0.0))
    throw config_error("scale_octaves must be positive, got " + std::to_string(scale_octaves));
}

std::size_t scale_boxcar_rows(double scale_octaves, double dj) {
  const double w = scale_octaves / dj;
  std::size_t nb = static_cast<std::size_t>(std::llround(w));
  if (nb % 2 == 0) nb += (w > static_cast<double>(nb)) ? 1 : -1;
  return std::max<std::size_t>(nb, 1);
}

namespace {

// Precomputed per-row kernel spectra and edge-mass corrections for one
// (grid, spec) combination. Rebuilt only when the layout changes.
class SmoothingPlan {
 public:
  SmoothingPlan(const ScaleGrid& grid, const SmoothingSpec& spec) : grid_(grid), spec_(spec) {
    const std::size_t n = grid.n;
    rows_.resize(grid.count());
    for (std::size_t j = 0; j < grid.count(); ++j) {
      Row& row = rows_[j];
      const double sigma = spec.time_bandwidth * grid.scales[j] / grid.dt;  // in samples
      row.hw = std::min<std::size_t>(static_cast<std::size_t>(std::ceil(6.5 * sigma)), n - 1);
      row.len = next_pow2(n + 2 * row.hw);

      std::vector<double> kernel(2 * row.hw + 1);
      double sum = 0.0;
      for (std::size_t i = 0; i < kernel.size(); ++i) {
        const double m = static_cast<double>(i) - static_cast<double>(row.hw);
        kernel[i] = std::exp(-0.5 * (m / sigma) * (m / sigma));
        sum += kernel[i];
      }
      for (double& k : kernel) k /= sum;

      row.spectrum.assign(row.len, 0.0);
      for (std::size_t i = 0; i < kernel.size(); ++i) row.spectrum[i] = kernel[i];
      FftPlan::shared(row.len).forward(row.spectrum);

      // in-record kernel mass per output column: out[u] covers kernel offsets
      // m in [u-(n-1), u] clipped to [-hw, hw]
      std::vector<double> cum(kernel.size() + 1, 0.0);
      for (std::size_t i = 0; i < kernel.size(); ++i) cum[i + 1] = cum[i] + kernel[i];
      row.inv_mass.resize(n);
      const auto hw_i = static_cast<std::int64_t>(row.hw);
      for (std::size_t u = 0; u < n; ++u) {
        const std::int64_t lo = std::max<std::int64_t>(-hw_i, static_cast<std::int64_t>(u) -
                                                                  static_cast<std::int64_t>(n) + 1);
        const std::int64_t hi = std::min<std::int64_t>(hw_i, static_cast<std::int64_t>(u));
        row.inv_mass[u] = 1.0 / (cum[hi + hw_i + 1] - cum[lo + hw_i]);
      }
    }
  }

  bool matches(const ScaleGrid& grid, const SmoothingSpec& spec) const {
    return grid_.same_layout(grid) && spec_.time_bandwidth == spec.time_bandwidth &&
           spec_.scale_octaves == spec.scale_octaves;
  }

  // Gaussian time smoothing of one real channel (linear convolution,
  // renormalized edges). Real and imaginary parts are convolved separately:
  // the FFT path is bitwise odd (negating the input negates every
  // intermediate), so conjugate inputs produce exactly conjugate outputs and
  // wtc(x,y) == wtc(y,x) holds bit for bit.
  void smooth_row(std::size_t j, std::span<const double> in, std::span<double> out) const {
    const Row& row = rows_[j];
    const std::size_t n = grid_.n;
    const FftPlan& plan = FftPlan::shared(row.len);
    std::vector<std::complex<double>> buf(row.len, 0.0);
    for (std::size_t i = 0; i < n; ++i) buf[i] = in[i];
    plan.forward(buf);
    for (std::size_t k = 0; k < row.len; ++k) buf[k] *= row.spectrum[k];
    plan.inverse(buf);
    for (std::size_t u = 0; u < n; ++u) out[u] = buf[row.hw + u].real() * row.inv_mass[u];
  }

  const ScaleGrid& grid() const { return grid_; }
  const SmoothingSpec& spec() const { return spec_; }

 private:
  struct Row {
    std::size_t hw = 0;   // kernel half-width in samples
    std::size_t len = 0;  // FFT length for linear convolution
    std::vector<std::complex<double>> spectrum;
    std::vector<double> inv_mass;
  };

  ScaleGrid grid_;
  SmoothingSpec spec_;
  std::vector<Row> rows_;
};

const SmoothingPlan& shared_plan(const ScaleGrid& grid, const SmoothingSpec& spec) {
  thread_local std::unique_ptr<SmoothingPlan> cache;
  if (!cache || !cache->matches(grid, spec))
    cache = std::make_unique<SmoothingPlan>(grid, spec);
  return *cache;
}

}  // namespace

namespace {

void require_shape(std::size_t rows, std::size_t cols, const ScaleGrid& grid) {
  if (rows != grid.count() || cols != grid.n)
    throw data_error("smooth_tf: grid is " + std::to_string(rows) + "x" + std::to_string(cols) +
                     ", expected " + std::to_string(grid.count()) + "x" +
                     std::to_string(grid.n));
}

Grid<double> smooth_real(const Grid<double>& m, const ScaleGrid& grid, const SmoothingSpec& spec) {
  const SmoothingPlan& plan = shared_plan(grid, spec);
  const std::size_t rows = m.rows(), cols = m.cols();
  Grid<double> timed(rows, cols);
  for (std::size_t j = 0; j < rows; ++j) plan.smooth_row(j, m.row(j), timed.row(j));

  const std::size_t nb = scale_boxcar_rows(spec.scale_octaves, grid.dj);
  const std::size_t hb = nb / 2;
  if (hb == 0) return timed;

  Grid<double> out(rows, cols);
  for (std::size_t j = 0; j < rows; ++j) {
    const std::size_t lo = (j >= hb) ? j - hb : 0;
    const std::size_t hi = std::min(rows - 1, j + hb);
    const double inv_count = 1.0 / static_cast<double>(hi - lo + 1);
    for (std::size_t t = 0; t < cols; ++t) {
      double acc = 0.0;
      for (std::size_t r = lo; r <= hi; ++r) acc += timed(r, t);
      out(j, t) = acc * inv_count;
    }
  }
  return out;
}

}  // namespace

Grid<std::complex<double>> smooth_tf(const Grid<std::complex<double>>& m, const ScaleGrid& grid,
                                     const SmoothingSpec& spec) {
  spec.validate();
  require_shape(m.rows(), m.cols(), grid);

  Grid<double> re(m.rows(), m.cols()), im(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.data().size(); ++i) {
    re.data()[i] = m.data()[i].real();
    im.data()[i] = m.data()[i].imag();
  }
  const Grid<double> sre = smooth_real(re, grid, spec);
  const Grid<double> sim = smooth_real(im, grid, spec);
  Grid<std::complex<double>> out(m.rows(), m.cols());
  for (std::size_t i = 0; i < out.data().size(); ++i)
    out.data()[i] = {sre.data()[i], sim.data()[i]};
  return out;
}

Grid<double> smooth_tf(const Grid<double>& m, const ScaleGrid& grid, const SmoothingSpec& spec) {
  spec.validate();
  require_shape(m.rows(), m.cols(), grid);
  Grid<double> out = smooth_real(m, grid, spec);
  // nonnegative inputs stay nonnegative; clip FFT rounding residue
  for (double& v : out.data()) v = std::max(v, 0.0);
  return out;
}

}  // namespace wcoh
