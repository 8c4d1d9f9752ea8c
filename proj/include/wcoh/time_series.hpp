#ifndef WCOH_TIME_SERIES_HPP
#define WCOH_TIME_SERIES_HPP

#include <string>
#include <utility>
#include <vector>

#include "wcoh/date.hpp"

namespace wcoh {

// Regularly sampled daily observations with an explicit date axis.
// Gaps are not representable: values[i] belongs to start + i.
struct TimeSeries {
  std::string name;
  Date start{};
  double step_days = 1.0;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  Date date_at(std::size_t i) const { return start + static_cast<std::int32_t>(i); }
  Date last() const { return start + static_cast<std::int32_t>(values.size()) - 1; }

  // N >= 2, finite values, positive step. Throws data_error.
  void validate() const;
};

// One block of search-interest data with arbitrary per-block normalization.
struct TrendsBlock {
  Date start{};
  double step_days = 1.0;
  std::vector<double> values;

  Date last() const { return start + static_cast<std::int32_t>(values.size()) - 1; }
};

enum class DeriveKind { ratio, per_event_price };

// Restricts both series to the intersection of their date ranges.
// Throws data_error when the intersection has fewer than 2 days.
std::pair<TimeSeries, TimeSeries> align_intersect(const TimeSeries& a, const TimeSeries& b);

// Rank transform to (0,1): value_i -> rank(x_i)/(N+1), average ranks for ties.
TimeSeries quantile_transform(const TimeSeries& ts);

// Chains overlapping blocks into one series. Each incoming block is rescaled by
// the ratio of means over the last `overlap_window` days shared with the series
// chained so far, then appended for its non-overlapping suffix.
TimeSeries chain_trends_blocks(const std::vector<TrendsBlock>& blocks, int overlap_window = 30);

// Elementwise a/b over an aligned pair; `kind` is recorded in the output name.
TimeSeries derive_series(DeriveKind kind, const TimeSeries& a, const TimeSeries& b);

const char* derive_kind_name(DeriveKind kind);

}  // namespace wcoh

#endif
