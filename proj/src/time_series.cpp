#include "wcoh/time_series.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wcoh/errors.hpp"

namespace wcoh {

void TimeSeries::validate() const {
  if (values.size() < 2)
    throw data_error("series '" + name + "' has " + std::to_string(values.size()) +
                     " observations, need at least 2");
  if (step_days <= 0.0) throw data_error("series '" + name + "' has non-positive step");
  for (std::size_t i = 0; i < values.size(); ++i)
    if (!std::isfinite(values[i]))
      throw data_error("series '" + name + "' has a non-finite value at " + date_at(i).iso());
}

std::pair<TimeSeries, TimeSeries> align_intersect(const TimeSeries& a, const TimeSeries& b) {
  a.validate();
  b.validate();
  const Date lo = std::max(a.start, b.start);
  const Date hi = std::min(a.last(), b.last());
  const std::int32_t n = hi - lo + 1;
  if (n < 2)
    throw data_error("date ranges [" + a.start.iso() + ".." + a.last().iso() + "] and [" +
                     b.start.iso() + ".." + b.last().iso() +
                     "] overlap by fewer than 2 days");
  auto slice = [&](const TimeSeries& ts) {
    TimeSeries out{ts.name, lo, ts.step_days, {}};
    const std::size_t off = static_cast<std::size_t>(lo - ts.start);
    out.values.assign(ts.values.begin() + off, ts.values.begin() + off + n);
    return out;
  };
  return {slice(a), slice(b)};
}

TimeSeries quantile_transform(const TimeSeries& ts) {
  ts.validate();
  const std::size_t n = ts.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return ts.values[i] < ts.values[j]; });

  TimeSeries out{ts.name + " (quantile)", ts.start, ts.step_days, std::vector<double>(n)};
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && ts.values[order[j + 1]] == ts.values[order[i]]) ++j;
    // average rank of the tied run, 1-based
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k)
      out.values[order[k]] = rank / static_cast<double>(n + 1);
    i = j + 1;
  }
  return out;
}

TimeSeries chain_trends_blocks(const std::vector<TrendsBlock>& blocks, int overlap_window) {
  if (blocks.empty()) throw data_error("no trend blocks to chain");
  if (overlap_window < 1) throw config_error("overlap_window must be >= 1");
  for (std::size_t k = 1; k < blocks.size(); ++k)
    if (blocks[k].start < blocks[k - 1].start)
      throw data_error("trend blocks are not sorted by start date");

  TimeSeries out{"chained_trends", blocks.front().start, blocks.front().step_days,
                 blocks.front().values};
  for (std::size_t k = 1; k < blocks.size(); ++k) {
    const TrendsBlock& b = blocks[k];
    const Date chained_end = out.last();
    const std::int32_t overlap = chained_end - b.start + 1;
    if (overlap < overlap_window)
      throw data_error("blocks " + std::to_string(k - 1) + " and " + std::to_string(k) +
                       " overlap by " + std::to_string(std::max<std::int32_t>(overlap, 0)) +
                       " days, need >= " + std::to_string(overlap_window));
    if (b.last() <= chained_end)
      throw data_error("block " + std::to_string(k) + " adds no days beyond " +
                       chained_end.iso());

    // rescale statistic over the last `overlap_window` shared days
    const Date win_lo = chained_end - (overlap_window - 1);
    double mean_run = 0.0, mean_in = 0.0;
    for (Date d = win_lo; d <= chained_end; ++d) {
      mean_run += out.values[static_cast<std::size_t>(d - out.start)];
      mean_in += b.values[static_cast<std::size_t>(d - b.start)];
    }
    mean_run /= overlap_window;
    mean_in /= overlap_window;
    if (mean_in == 0.0)
      throw data_error("block " + std::to_string(k) + " has zero mean over the overlap window " +
                       win_lo.iso() + ".." + chained_end.iso());
    const double factor = mean_run / mean_in;
    for (Date d = chained_end + 1; d <= b.last(); ++d)
      out.values.push_back(b.values[static_cast<std::size_t>(d - b.start)] * factor);
  }
  return out;
}

const char* derive_kind_name(DeriveKind kind) {
  return kind == DeriveKind::ratio ? "ratio" : "per_event_price";
}

TimeSeries derive_series(DeriveKind kind, const TimeSeries& a, const TimeSeries& b) {
  a.validate();
  b.validate();
  if (a.start != b.start || a.size() != b.size())
    throw data_error("derive_series requires aligned inputs; align_intersect them first");
  TimeSeries out{std::string(derive_kind_name(kind)) + "(" + a.name + "/" + b.name + ")",
                 a.start, a.step_days, std::vector<double>(a.size())};
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (b.values[i] <= 0.0)
      throw data_error("denominator '" + b.name + "' is " + std::to_string(b.values[i]) +
                       " at " + b.date_at(i).iso() + "; must be strictly positive");
    out.values[i] = a.values[i] / b.values[i];
  }
  return out;
}

}  // namespace wcoh
