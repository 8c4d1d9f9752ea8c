#include "wcoh/config.hpp"

#include <fstream>
#include <set>

#include "wcoh/errors.hpp"

namespace wcoh {

namespace {

const std::set<std::string> known_keys = {
    "omega0",     "s0",       "dj",        "max_period_fraction",
    "time_bandwidth", "scale_octaves", "nsims", "seed",
    "significance_level", "significance_mode", "transform", "fill",
    "detrend",    "padding",  "output_dir"};

std::string enum_value(const nlohmann::json& j, const char* key) {
  if (!j.at(key).is_string()) throw config_error(std::string("key '") + key + "' must be a string");
  return j.at(key).get<std::string>();
}

void apply_keys(AnalysisConfig& cfg, const nlohmann::json& j) {
  for (const auto& [key, value] : j.items()) {
    if (!known_keys.count(key)) throw config_error("unknown config key '" + key + "'");
    (void)value;
  }
  if (j.contains("omega0")) cfg.wavelet.omega0 = j.at("omega0").get<double>();
  if (j.contains("s0")) cfg.s0 = j.at("s0").get<double>();
  if (j.contains("dj")) cfg.dj = j.at("dj").get<double>();
  if (j.contains("max_period_fraction"))
    cfg.max_period_fraction = j.at("max_period_fraction").get<double>();
  if (j.contains("time_bandwidth")) cfg.smoothing.time_bandwidth = j.at("time_bandwidth").get<double>();
  if (j.contains("scale_octaves")) cfg.smoothing.scale_octaves = j.at("scale_octaves").get<double>();
  if (j.contains("nsims")) cfg.nsims = j.at("nsims").get<std::size_t>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("significance_level"))
    cfg.significance_level = j.at("significance_level").get<double>();
  if (j.contains("significance_mode")) {
    const std::string mode = enum_value(j, "significance_mode");
    if (mode == "per_scale") cfg.significance_mode = SigMode::per_scale;
    else if (mode == "per_cell") cfg.significance_mode = SigMode::per_cell;
    else throw config_error("significance_mode must be 'per_scale' or 'per_cell', got '" + mode + "'");
  }
  if (j.contains("transform")) {
    const std::string t = enum_value(j, "transform");
    if (t == "quantile") cfg.transform = TransformKind::quantile;
    else if (t == "none") cfg.transform = TransformKind::none;
    else throw config_error("transform must be 'quantile' or 'none', got '" + t + "'");
  }
  if (j.contains("fill")) {
    const std::string f = enum_value(j, "fill");
    if (f == "none") cfg.fill = FillPolicy::none;
    else if (f == "forward") cfg.fill = FillPolicy::forward;
    else throw config_error("fill must be 'none' or 'forward', got '" + f + "'");
  }
  if (j.contains("detrend")) cfg.detrend = j.at("detrend").get<bool>();
  if (j.contains("padding")) {
    const std::string p = enum_value(j, "padding");
    if (p == "pow2") cfg.padding = Padding::pow2;
    else if (p == "extended") cfg.padding = Padding::extended;
    else if (p == "none") cfg.padding = Padding::none;
    else throw config_error("padding must be 'pow2', 'extended' or 'none', got '" + p + "'");
  }
  if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
}

}  // namespace

void AnalysisConfig::validate() const {
  wavelet.validate();
  if (!(s0 > 0.0)) throw config_error("config key 's0' must be positive");
  if (!(dj > 0.0 && dj <= 1.0)) throw config_error("config key 'dj' must be in (0, 1]");
  if (!(max_period_fraction > 0.0 && max_period_fraction <= 1.0))
    throw config_error("config key 'max_period_fraction' must be in (0, 1]");
  smoothing.validate();
  if (nsims < 100) throw config_error("config key 'nsims' must be >= 100");
  if (!(significance_level > 0.0 && significance_level < 1.0))
    throw config_error("config key 'significance_level' must be in (0, 1)");
}

AnalysisConfig parse_config(const std::optional<std::filesystem::path>& file,
                            const nlohmann::json& overrides) {
  AnalysisConfig cfg;
  if (file) {
    std::ifstream in(*file);
    if (!in) throw config_error("cannot open config file: " + file->string());
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw config_error("config file " + file->string() + ": " + e.what());
    }
    if (!j.is_object()) throw config_error("config file must hold a flat JSON object");
    apply_keys(cfg, j);
  }
  apply_keys(cfg, overrides);
  cfg.validate();
  return cfg;
}

nlohmann::json config_to_json(const AnalysisConfig& cfg) {
  return nlohmann::json{
      {"omega0", cfg.wavelet.omega0},
      {"s0", cfg.s0},
      {"dj", cfg.dj},
      {"max_period_fraction", cfg.max_period_fraction},
      {"time_bandwidth", cfg.smoothing.time_bandwidth},
      {"scale_octaves", cfg.smoothing.scale_octaves},
      {"nsims", cfg.nsims},
      {"seed", cfg.seed},
      {"significance_level", cfg.significance_level},
      {"significance_mode", cfg.significance_mode == SigMode::per_scale ? "per_scale" : "per_cell"},
      {"transform", cfg.transform == TransformKind::quantile ? "quantile" : "none"},
      {"fill", cfg.fill == FillPolicy::none ? "none" : "forward"},
      {"detrend", cfg.detrend},
      {"padding", cfg.padding == Padding::pow2 ? "pow2"
                  : cfg.padding == Padding::extended ? "extended" : "none"},
      {"output_dir", cfg.output_dir},
  };
}

AnalysisConfig config_from_json(const nlohmann::json& j) {
  AnalysisConfig cfg;
  apply_keys(cfg, j);
  cfg.validate();
  return cfg;
}

}  // namespace wcoh
