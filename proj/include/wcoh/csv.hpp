#ifndef WCOH_CSV_HPP
#define WCOH_CSV_HPP

#include <filesystem>
#include <string>

#include "wcoh/time_series.hpp"

namespace wcoh {

enum class FillPolicy { none, forward };

// Reads one named value column keyed by an ISO-8601 date column.
// Rows are sorted by date; duplicate dates and (unless forward-filling)
// gaps in the daily range are hard errors naming the offending row/day.
TimeSeries load_csv(const std::filesystem::path& path, const std::string& date_column,
                    const std::string& value_column, FillPolicy fill = FillPolicy::none);

// Loads a series as a chainable search-interest block.
TrendsBlock load_trends_block(const std::filesystem::path& path, const std::string& date_column,
                              const std::string& value_column);

// Header row "date,<name>", one row per day, values at full precision.
void write_csv(const TimeSeries& ts, const std::filesystem::path& path);

}  // namespace wcoh

#endif
