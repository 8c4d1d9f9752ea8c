#ifndef WCOH_GRID_IO_HPP
#define WCOH_GRID_IO_HPP

#include <filesystem>
#include <optional>

#include "wcoh/coherence.hpp"
#include "wcoh/significance.hpp"

namespace wcoh {

enum class GridFormat { csv, json };

// CSV: first row "period_days" + one date per column, first column the
// period ladder, body = map values.
// JSON: the whole map (axes, values, phase, mask, COI, config echo) at full
// precision; a later import reproduces the map bit-exactly. The significance
// object is only present when `sig` is given.
void export_grid(const CoherenceMap& map, const SignificanceResult* sig,
                 const std::filesystem::path& path, GridFormat format);

CoherenceMap import_grid_json(const std::filesystem::path& path,
                              std::optional<SignificanceResult>* sig_out = nullptr);

void export_significance_json(const SignificanceResult& sig, const std::filesystem::path& path);
SignificanceResult import_significance_json(const std::filesystem::path& path);

}  // namespace wcoh

#endif
