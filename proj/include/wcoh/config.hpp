#ifndef WCOH_CONFIG_HPP
#define WCOH_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "wcoh/csv.hpp"
#include "wcoh/cwt.hpp"
#include "wcoh/smoothing.hpp"
#include "wcoh/wavelet.hpp"

namespace wcoh {

enum class TransformKind { quantile, none };
enum class SigMode { per_scale, per_cell };

// Every tunable of the analysis pipeline. A resolved copy is embedded in
// each output bundle so runs can be reproduced exactly.
struct AnalysisConfig {
  WaveletSpec wavelet{};
  double s0 = 2.0;  // smallest scale, days (2 x the daily sampling step)
  double dj = 1.0 / 12.0;
  double max_period_fraction = 1.0;
  SmoothingSpec smoothing{};
  std::size_t nsims = 300;
  std::uint64_t seed = 42;
  double significance_level = 0.95;
  SigMode significance_mode = SigMode::per_scale;
  TransformKind transform = TransformKind::quantile;
  FillPolicy fill = FillPolicy::none;
  bool detrend = false;
  Padding padding = Padding::pow2;
  std::string output_dir;

  void validate() const;  // throws config_error naming the offending key
};

// Flat key-value JSON document; flags override file values; unknown keys
// are an error, never ignored.
AnalysisConfig parse_config(const std::optional<std::filesystem::path>& file,
                            const nlohmann::json& overrides = nlohmann::json::object());

nlohmann::json config_to_json(const AnalysisConfig& cfg);
AnalysisConfig config_from_json(const nlohmann::json& j);

}  // namespace wcoh

#endif
