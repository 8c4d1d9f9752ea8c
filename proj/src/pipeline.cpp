#include "wcoh/pipeline.hpp"

#include <atomic>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "wcoh/errors.hpp"
#include "wcoh/grid_io.hpp"
#include "wcoh/sha256.hpp"
#include "wcoh/version.hpp"

namespace wcoh {

namespace {

using nlohmann::json;

template <typename Fn>
auto stage(const char* name, Fn&& fn) {
  try {
    return fn();
  } catch (const config_error& e) {
    throw config_error(std::string("stage ") + name + ": " + e.what());
  } catch (const data_error& e) {
    throw data_error(std::string("stage ") + name + ": " + e.what());
  }
}

TimeSeries clamp_window(const TimeSeries& ts, std::optional<Date> lo, std::optional<Date> hi) {
  if (!lo && !hi) return ts;
  const Date from = lo ? std::max(*lo, ts.start) : ts.start;
  const Date to = hi ? std::min(*hi, ts.last()) : ts.last();
  if (to - from + 1 < 2)
    throw data_error("window [" + (lo ? lo->iso() : "..") + ".." + (hi ? hi->iso() : "..") +
                     "] leaves fewer than 2 days of '" + ts.name + "'");
  TimeSeries out{ts.name, from, ts.step_days, {}};
  const std::size_t off = static_cast<std::size_t>(from - ts.start);
  out.values.assign(ts.values.begin() + off,
                    ts.values.begin() + off + static_cast<std::size_t>(to - from + 1));
  return out;
}

void align_all(std::vector<TimeSeries>& series) {
  Date lo = series.front().start, hi = series.front().last();
  for (const auto& ts : series) {
    lo = std::max(lo, ts.start);
    hi = std::min(hi, ts.last());
  }
  if (hi - lo + 1 < 2) {
    std::string ranges;
    for (const auto& ts : series)
      ranges += (ranges.empty() ? "" : ", ") + ts.name + " [" + ts.start.iso() + ".." +
                ts.last().iso() + "]";
    throw data_error("date ranges overlap by fewer than 2 days: " + ranges);
  }
  for (auto& ts : series) ts = clamp_window(ts, lo, hi);
}

std::string default_label(const std::filesystem::path& x, const std::filesystem::path& y) {
  return x.stem().string() + "_vs_" + y.stem().string();
}

void check_label(const std::string& label) {
  if (label.empty()) throw config_error("output label must not be empty");
  if (label.find('/') != std::string::npos || label.find('\\') != std::string::npos)
    throw config_error("output label must not contain path separators: '" + label + "'");
}

json recipe_provenance(const SeriesRecipe& recipe, const TimeSeries& loaded) {
  json files = json::array();
  for (const auto& f : recipe.referenced_files())
    files.push_back({{"path", f.string()}, {"sha256", sha256_file(f)}});
  return json{{"name", loaded.name},
              {"files", files},
              {"rows", loaded.size()},
              {"start", loaded.start.iso()},
              {"end", loaded.last().iso()}};
}

RunResult run_pipeline(const ManifestEntry& entry, const AnalysisConfig& cfg,
                       const std::filesystem::path& out_dir, const RenderOptions& render_opts) {
  cfg.validate();
  check_label(entry.label);
  if (entry.kind == MapKind::pwc && !entry.confounder)
    throw config_error("pwc entry '" + entry.label + "' needs a confounder series");
  if (entry.kind == MapKind::xwt_power)
    throw config_error("replication entries support wtc and pwc kinds");

  std::vector<TimeSeries> series = stage("load", [&] {
    std::vector<TimeSeries> out;
    out.push_back(entry.x.load(cfg.fill));
    out.push_back(entry.y.load(cfg.fill));
    if (entry.kind == MapKind::pwc) out.push_back(entry.confounder->load(cfg.fill));
    return out;
  });

  json inputs = json::array();
  inputs.push_back(recipe_provenance(entry.x, series[0]));
  inputs.push_back(recipe_provenance(entry.y, series[1]));
  if (entry.kind == MapKind::pwc) inputs.push_back(recipe_provenance(*entry.confounder, series[2]));

  stage("align", [&] {
    align_all(series);
    for (auto& ts : series) ts = clamp_window(ts, entry.window_start, entry.window_end);
    return 0;
  });

  stage("transform", [&] {
    if (cfg.transform == TransformKind::quantile)
      for (auto& ts : series) ts = quantile_transform(ts);
    return 0;
  });

  std::vector<Ar1Model> models = stage("fit", [&] {
    std::vector<Ar1Model> out;
    for (const auto& ts : series) out.push_back(fit_ar1(ts));
    return out;
  });

  std::vector<CwtMatrix> transforms = stage("cwt", [&] {
    const ScaleGrid grid = build_scale_grid(series.front().size(), series.front().step_days,
                                            cfg.s0, cfg.dj, cfg.max_period_fraction, cfg.wavelet);
    std::vector<CwtMatrix> out;
    for (const auto& ts : series)
      out.push_back(cwt_transform(ts, grid, cfg.wavelet, cfg.padding, cfg.detrend));
    return out;
  });

  CoherenceMap map = stage("coherence", [&] {
    return entry.kind == MapKind::pwc ? pwc(transforms[0], transforms[1], transforms[2],
                                            cfg.smoothing)
                                      : wtc(transforms[0], transforms[1], cfg.smoothing);
  });
  map.meta = cfg;

  SignificanceResult sig = stage("significance", [&] { return mc_threshold(map, models, cfg); });
  attach_significance(map, sig);

  RunResult result{entry.label, std::move(map), std::move(sig), out_dir / entry.label};
  stage("export", [&] {
    std::filesystem::create_directories(result.bundle_dir);
    export_grid(result.map, nullptr, result.bundle_dir / "map.csv", GridFormat::csv);
    export_grid(result.map, &result.significance, result.bundle_dir / "map.json",
                GridFormat::json);
    export_significance_json(result.significance, result.bundle_dir / "significance.json");
    const std::string svg = render_map_svg(result.map, &result.significance, render_opts);
    {
      std::ofstream out(result.bundle_dir / "map.svg", std::ios::binary);
      if (!out) throw data_error("cannot write " + (result.bundle_dir / "map.svg").string());
      out << svg;
    }
    if (render_opts.format == ImageFormat::png) {
      const auto png = render_map_png(result.map, &result.significance, render_opts);
      std::ofstream out(result.bundle_dir / "map.png", std::ios::binary);
      out.write(reinterpret_cast<const char*>(png.data()),
                static_cast<std::streamsize>(png.size()));
    }
    json run{{"tool", "wcoh"},
             {"version", kVersion},
             {"label", entry.label},
             {"kind", map_kind_name(result.map.kind)},
             {"config", config_to_json(cfg)},
             {"seed", cfg.seed},
             {"inputs", inputs},
             {"significant_coi_fraction", result.significance.significant_coi_fraction},
             {"outputs", json::array({"map.csv", "map.json", "map.svg", "significance.json"})}};
    std::ofstream out(result.bundle_dir / "run.json");
    if (!out) throw data_error("cannot write " + (result.bundle_dir / "run.json").string());
    out << run.dump(1) << "\n";
    return 0;
  });
  return result;
}

SeriesRecipe recipe_from_json(const json& j, const std::string& label) {
  SeriesRecipe recipe;
  if (j.contains("date_column")) recipe.date_column = j.at("date_column").get<std::string>();
  if (j.contains("value_column")) recipe.value_column = j.at("value_column").get<std::string>();
  if (j.contains("path")) {
    recipe.source = SeriesRecipe::Source::file;
    recipe.path = j.at("path").get<std::string>();
  } else if (j.contains("derive")) {
    recipe.source = SeriesRecipe::Source::derive;
    const std::string kind = j.at("derive").get<std::string>();
    if (kind == "ratio") recipe.derive_kind = DeriveKind::ratio;
    else if (kind == "per_event_price") recipe.derive_kind = DeriveKind::per_event_price;
    else throw config_error("entry '" + label + "': unknown derive kind '" + kind + "'");
    recipe.numerator = j.at("numerator").get<std::string>();
    recipe.denominator = j.at("denominator").get<std::string>();
  } else if (j.contains("chain_blocks")) {
    recipe.source = SeriesRecipe::Source::chain;
    for (const auto& b : j.at("chain_blocks")) recipe.blocks.emplace_back(b.get<std::string>());
    if (recipe.blocks.empty())
      throw config_error("entry '" + label + "': chain_blocks must not be empty");
    if (j.contains("overlap_window")) recipe.overlap_window = j.at("overlap_window").get<int>();
  } else {
    throw config_error("entry '" + label +
                       "': series needs one of 'path', 'derive' or 'chain_blocks'");
  }
  return recipe;
}

}  // namespace

TimeSeries SeriesRecipe::load(FillPolicy fill) const {
  switch (source) {
    case Source::file:
      return load_csv(path, date_column, value_column, fill);
    case Source::derive: {
      const TimeSeries num = load_csv(numerator, date_column, value_column, fill);
      const TimeSeries den = load_csv(denominator, date_column, value_column, fill);
      const auto [a, b] = align_intersect(num, den);
      return derive_series(derive_kind, a, b);
    }
    case Source::chain: {
      std::vector<TrendsBlock> loaded;
      for (const auto& b : blocks) loaded.push_back(load_trends_block(b, date_column, value_column));
      return chain_trends_blocks(loaded, overlap_window);
    }
  }
  throw config_error("unknown series source");
}

std::vector<std::filesystem::path> SeriesRecipe::referenced_files() const {
  switch (source) {
    case Source::file: return {path};
    case Source::derive: return {numerator, denominator};
    case Source::chain: return blocks;
  }
  return {};
}

ReplicationManifest ReplicationManifest::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open manifest: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw config_error("manifest " + path.string() + ": " + e.what());
  }
  if (!j.contains("entries") || !j.at("entries").is_array())
    throw config_error("manifest must contain an 'entries' array");

  ReplicationManifest manifest;
  for (const auto& je : j.at("entries")) {
    ManifestEntry entry;
    entry.label = je.at("label").get<std::string>();
    check_label(entry.label);
    const std::string kind = je.value("kind", "wtc");
    entry.kind = map_kind_from_name(kind);
    if (entry.kind == MapKind::xwt_power)
      throw config_error("entry '" + entry.label + "': kind must be wtc or pwc");
    entry.x = recipe_from_json(je.at("x"), entry.label);
    entry.y = recipe_from_json(je.at("y"), entry.label);
    if (je.contains("confounder")) entry.confounder = recipe_from_json(je.at("confounder"), entry.label);
    if (entry.kind == MapKind::pwc && !entry.confounder)
      throw config_error("entry '" + entry.label + "': pwc needs a confounder");
    if (je.contains("window")) {
      const auto& w = je.at("window");
      if (w.contains("start")) entry.window_start = Date::parse(w.at("start").get<std::string>());
      if (w.contains("end")) entry.window_end = Date::parse(w.at("end").get<std::string>());
    }
    for (const auto& other : manifest.entries)
      if (other.label == entry.label)
        throw config_error("duplicate manifest label '" + entry.label + "'");
    manifest.entries.push_back(std::move(entry));
  }
  return manifest;
}

RunResult run_pair(const std::filesystem::path& x_path, const std::filesystem::path& y_path,
                   const AnalysisConfig& cfg, const std::filesystem::path& out_dir,
                   const std::string& label, const RenderOptions& render) {
  ManifestEntry entry;
  entry.label = label.empty() ? default_label(x_path, y_path) : label;
  entry.kind = MapKind::wtc;
  entry.x.path = x_path;
  entry.y.path = y_path;
  return run_pipeline(entry, cfg, out_dir, render);
}

RunResult run_entry(const ManifestEntry& entry, const AnalysisConfig& cfg,
                    const std::filesystem::path& out_dir, const RenderOptions& render) {
  return run_pipeline(entry, cfg, out_dir, render);
}

std::vector<EntryOutcome> run_replication(const ReplicationManifest& manifest,
                                          const AnalysisConfig& cfg,
                                          const std::filesystem::path& out_dir,
                                          std::size_t jobs, const RenderOptions& render) {
  cfg.validate();
  std::filesystem::create_directories(out_dir);
  std::vector<EntryOutcome> outcomes(manifest.entries.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= manifest.entries.size()) return;
      EntryOutcome& o = outcomes[i];
      o.label = manifest.entries[i].label;
      try {
        const RunResult r = run_entry(manifest.entries[i], cfg, out_dir, render);
        o.ok = true;
        o.significant_coi_fraction = r.significance.significant_coi_fraction;
      } catch (const std::exception& e) {
        o.ok = false;
        o.error = e.what();
      }
    }
  };
  if (jobs <= 1 || manifest.entries.size() <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    const std::size_t n = std::min(jobs, manifest.entries.size());
    pool.reserve(n);
    for (std::size_t i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  json index{{"tool", "wcoh"}, {"version", kVersion}, {"entries", json::array()}};
  std::size_t failed = 0;
  for (const auto& o : outcomes) {
    json je{{"label", o.label}, {"status", o.ok ? "ok" : "failed"}};
    if (o.ok)
      je["significant_coi_fraction"] = o.significant_coi_fraction;
    else
      je["error"] = o.error;
    index["entries"].push_back(std::move(je));
    if (!o.ok) ++failed;
  }
  index["failed"] = failed;
  std::ofstream out(out_dir / "index.json");
  if (!out) throw data_error("cannot write " + (out_dir / "index.json").string());
  out << index.dump(1) << "\n";
  return outcomes;
}

}  // namespace wcoh
