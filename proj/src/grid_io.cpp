#include "wcoh/grid_io.hpp"

#include <charconv>
#include <fstream>

#include <json.hpp>

#include "wcoh/config.hpp"
#include "wcoh/errors.hpp"

namespace wcoh {

namespace {

using nlohmann::json;

std::string full_precision(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json grid_rows(const Grid<double>& g) {
  json rows = json::array();
  for (std::size_t j = 0; j < g.rows(); ++j) {
    json row = json::array();
    for (std::size_t t = 0; t < g.cols(); ++t) row.push_back(g(j, t));
    rows.push_back(std::move(row));
  }
  return rows;
}

json mask_rows(const Grid<std::uint8_t>& g) {
  json rows = json::array();
  for (std::size_t j = 0; j < g.rows(); ++j) {
    json row = json::array();
    for (std::size_t t = 0; t < g.cols(); ++t) row.push_back(static_cast<int>(g(j, t)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Grid<double> grid_from_rows(const json& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r ? rows.at(0).size() : 0;
  Grid<double> g(r, c);
  for (std::size_t j = 0; j < r; ++j)
    for (std::size_t t = 0; t < c; ++t) g(j, t) = rows.at(j).at(t).get<double>();
  return g;
}

Grid<std::uint8_t> mask_from_rows(const json& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r ? rows.at(0).size() : 0;
  Grid<std::uint8_t> g(r, c);
  for (std::size_t j = 0; j < r; ++j)
    for (std::size_t t = 0; t < c; ++t)
      g(j, t) = static_cast<std::uint8_t>(rows.at(j).at(t).get<int>());
  return g;
}

json significance_to_json(const SignificanceResult& sig) {
  json j{{"mode", sig.mode == SigMode::per_scale ? "per_scale" : "per_cell"},
         {"level", sig.level},
         {"nsims", sig.nsims},
         {"seed", sig.seed},
         {"significant_coi_fraction", sig.significant_coi_fraction},
         {"mask", mask_rows(sig.mask)}};
  if (sig.mode == SigMode::per_scale)
    j["scale_threshold"] = sig.scale_threshold;
  else
    j["cell_threshold"] = grid_rows(sig.cell_threshold);
  return j;
}

SignificanceResult significance_from_json(const json& j) {
  SignificanceResult sig;
  sig.mode = j.at("mode").get<std::string>() == "per_cell" ? SigMode::per_cell : SigMode::per_scale;
  sig.level = j.at("level").get<double>();
  sig.nsims = j.at("nsims").get<std::size_t>();
  sig.seed = j.at("seed").get<std::uint64_t>();
  sig.significant_coi_fraction = j.at("significant_coi_fraction").get<double>();
  sig.mask = mask_from_rows(j.at("mask"));
  if (j.contains("scale_threshold"))
    sig.scale_threshold = j.at("scale_threshold").get<std::vector<double>>();
  if (j.contains("cell_threshold")) sig.cell_threshold = grid_from_rows(j.at("cell_threshold"));
  return sig;
}

void export_csv(const CoherenceMap& map, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot write file: " + path.string());
  out << "period_days";
  for (std::size_t t = 0; t < map.cols(); ++t)
    out << ',' << (map.start + static_cast<std::int32_t>(t)).iso();
  out << "\n";
  for (std::size_t j = 0; j < map.rows(); ++j) {
    out << full_precision(map.grid.period(j));
    for (std::size_t t = 0; t < map.cols(); ++t) out << ',' << full_precision(map.values(j, t));
    out << "\n";
  }
  if (!out) throw data_error("write failed: " + path.string());
}

void export_json(const CoherenceMap& map, const SignificanceResult* sig,
                 const std::filesystem::path& path) {
  json j{{"kind", map_kind_name(map.kind)},
         {"start_date", map.start.iso()},
         {"source_names", map.source_names},
         {"grid",
          {{"n", map.grid.n},
           {"dt", map.grid.dt},
           {"s0", map.grid.s0},
           {"dj", map.grid.dj},
           {"max_period_fraction", map.grid.max_period_fraction},
           {"fourier_factor", map.grid.fourier_factor},
           {"scales", map.grid.scales}}},
         {"coi", map.coi},
         {"config", config_to_json(map.meta)},
         {"clip_count", map.clip_count},
         {"values", grid_rows(map.values)},
         {"phase", grid_rows(map.phase)},
         {"masked", mask_rows(map.masked)}};
  if (!map.scale_threshold.empty()) j["scale_threshold"] = map.scale_threshold;
  if (!map.cell_threshold.empty()) j["cell_threshold"] = grid_rows(map.cell_threshold);
  if (sig) j["significance"] = significance_to_json(*sig);
  std::ofstream out(path);
  if (!out) throw data_error("cannot write file: " + path.string());
  out << j.dump(1) << "\n";
  if (!out) throw data_error("write failed: " + path.string());
}

}  // namespace

void export_grid(const CoherenceMap& map, const SignificanceResult* sig,
                 const std::filesystem::path& path, GridFormat format) {
  if (format == GridFormat::csv)
    export_csv(map, path);
  else
    export_json(map, sig, path);
}

CoherenceMap import_grid_json(const std::filesystem::path& path,
                              std::optional<SignificanceResult>* sig_out) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open file: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw data_error(path.string() + ": " + e.what());
  }

  CoherenceMap map;
  map.kind = map_kind_from_name(j.at("kind").get<std::string>());
  map.start = Date::parse(j.at("start_date").get<std::string>());
  map.source_names = j.at("source_names").get<std::vector<std::string>>();
  const json& g = j.at("grid");
  map.grid.n = g.at("n").get<std::size_t>();
  map.grid.dt = g.at("dt").get<double>();
  map.grid.s0 = g.at("s0").get<double>();
  map.grid.dj = g.at("dj").get<double>();
  map.grid.max_period_fraction = g.at("max_period_fraction").get<double>();
  map.grid.fourier_factor = g.at("fourier_factor").get<double>();
  map.grid.scales = g.at("scales").get<std::vector<double>>();
  map.coi = j.at("coi").get<std::vector<double>>();
  map.meta = config_from_json(j.at("config"));
  map.clip_count = j.at("clip_count").get<std::size_t>();
  map.values = grid_from_rows(j.at("values"));
  map.phase = grid_from_rows(j.at("phase"));
  map.masked = mask_from_rows(j.at("masked"));
  if (j.contains("scale_threshold"))
    map.scale_threshold = j.at("scale_threshold").get<std::vector<double>>();
  if (j.contains("cell_threshold")) map.cell_threshold = grid_from_rows(j.at("cell_threshold"));
  if (sig_out) {
    *sig_out = j.contains("significance")
                   ? std::optional<SignificanceResult>(significance_from_json(j.at("significance")))
                   : std::nullopt;
  }
  return map;
}

void export_significance_json(const SignificanceResult& sig, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot write file: " + path.string());
  out << significance_to_json(sig).dump(1) << "\n";
  if (!out) throw data_error("write failed: " + path.string());
}

SignificanceResult import_significance_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open file: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw data_error(path.string() + ": " + e.what());
  }
  return significance_from_json(j);
}

}  // namespace wcoh
