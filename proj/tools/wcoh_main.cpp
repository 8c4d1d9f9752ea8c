#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wcoh/csv.hpp"
#include "wcoh/errors.hpp"
#include "wcoh/grid_io.hpp"
#include "wcoh/pipeline.hpp"
#include "wcoh/sha256.hpp"
#include "wcoh/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Config flags shared by the analysis subcommands. Flags override file values.
struct ConfigFlags {
  std::string config_file;
  double omega0 = 0, s0 = 0, dj = 0, max_period_fraction = 0;
  double time_bandwidth = 0, scale_octaves = 0, sig_level = 0;
  std::size_t nsims = 0;
  std::uint64_t seed = 0;
  std::string sig_mode, transform, fill, padding;
  bool detrend = false;

  CLI::Option *o_omega0, *o_s0, *o_dj, *o_mpf, *o_tbw, *o_soct, *o_level;
  CLI::Option *o_nsims, *o_seed, *o_mode, *o_transform, *o_fill, *o_padding, *o_detrend;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--config", config_file, "JSON config file (flat key-value object)");
    o_omega0 = cmd->add_option("--omega0", omega0, "Morlet center frequency (default 6)");
    o_s0 = cmd->add_option("--s0", s0, "smallest scale in days (default 2)");
    o_dj = cmd->add_option("--dj", dj, "sub-octave spacing (default 1/12)");
    o_mpf = cmd->add_option("--max-period-fraction", max_period_fraction,
                            "largest period as a fraction of the record (default 1)");
    o_tbw = cmd->add_option("--time-bandwidth", time_bandwidth,
                            "time-smoothing std as a multiple of scale (default 1)");
    o_soct = cmd->add_option("--scale-octaves", scale_octaves,
                             "scale-smoothing boxcar width in octaves (default 0.6)");
    o_nsims = cmd->add_option("--nsims", nsims, "Monte Carlo replications (default 300)");
    o_seed = cmd->add_option("--seed", seed, "RNG seed (default 42)");
    o_level = cmd->add_option("--sig-level", sig_level, "significance level (default 0.95)");
    o_mode = cmd->add_option("--sig-mode", sig_mode, "per_scale or per_cell");
    o_transform = cmd->add_option("--transform", transform, "quantile or none");
    o_fill = cmd->add_option("--fill", fill, "gap policy: none or forward");
    o_padding = cmd->add_option("--padding", padding, "pow2, extended or none");
    o_detrend = cmd->add_flag("--detrend", detrend, "remove a linear trend before the CWT");
  }

  wcoh::AnalysisConfig resolve() const {
    json overrides = json::object();
    if (o_omega0->count()) overrides["omega0"] = omega0;
    if (o_s0->count()) overrides["s0"] = s0;
    if (o_dj->count()) overrides["dj"] = dj;
    if (o_mpf->count()) overrides["max_period_fraction"] = max_period_fraction;
    if (o_tbw->count()) overrides["time_bandwidth"] = time_bandwidth;
    if (o_soct->count()) overrides["scale_octaves"] = scale_octaves;
    if (o_nsims->count()) overrides["nsims"] = nsims;
    if (o_seed->count()) overrides["seed"] = seed;
    if (o_level->count()) overrides["significance_level"] = sig_level;
    if (o_mode->count()) overrides["significance_mode"] = sig_mode;
    if (o_transform->count()) overrides["transform"] = transform;
    if (o_fill->count()) overrides["fill"] = fill;
    if (o_padding->count()) overrides["padding"] = padding;
    if (o_detrend->count()) overrides["detrend"] = true;
    std::optional<fs::path> file;
    if (!config_file.empty()) file = config_file;
    return wcoh::parse_config(file, overrides);
  }
};

struct RenderFlags {
  std::string palette = "hot";
  std::size_t stride_time = 0, stride_scale = 0, width = 960, height = 640;
  double arrow_min = 0.5;
  std::string convention = "paper_downleads";
  std::string format = "svg";

  void add_to(CLI::App* cmd) {
    cmd->add_option("--palette", palette, "color map: hot or gray");
    cmd->add_option("--arrow-stride-time", stride_time, "arrow decimation in time (0 = auto)");
    cmd->add_option("--arrow-stride-scale", stride_scale, "arrow decimation in scale (0 = auto)");
    cmd->add_option("--arrow-min", arrow_min, "minimum coherence for an arrow (default 0.5)");
    cmd->add_option("--convention", convention, "arrow convention: paper_downleads or math_angle");
    cmd->add_option("--width", width, "image width in pixels");
    cmd->add_option("--height", height, "image height in pixels");
    cmd->add_option("--format", format, "image format: svg or png");
  }

  wcoh::RenderOptions resolve() const {
    wcoh::RenderOptions opts;
    opts.color_map = palette;
    opts.arrow_stride_time = stride_time;
    opts.arrow_stride_scale = stride_scale;
    opts.arrow_min_coherence = arrow_min;
    if (convention == "math_angle")
      opts.lead_convention = wcoh::LeadConvention::math_angle;
    else if (convention == "paper_downleads")
      opts.lead_convention = wcoh::LeadConvention::paper_downleads;
    else
      throw wcoh::config_error("unknown convention '" + convention + "'");
    opts.width = width;
    opts.height = height;
    if (format == "png")
      opts.format = wcoh::ImageFormat::png;
    else if (format == "svg")
      opts.format = wcoh::ImageFormat::svg;
    else
      throw wcoh::config_error("unknown image format '" + format + "'");
    opts.validate();
    return opts;
  }
};

wcoh::FillPolicy parse_fill(const std::string& s) {
  if (s == "none") return wcoh::FillPolicy::none;
  if (s == "forward") return wcoh::FillPolicy::forward;
  throw wcoh::config_error("fill must be 'none' or 'forward', got '" + s + "'");
}

void echo_config(const wcoh::AnalysisConfig& cfg) {
  std::cout << "config: " << wcoh::config_to_json(cfg).dump() << "\n";
}

void write_bytes(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw wcoh::data_error("cannot write file: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-frequency co-movement analysis: Morlet wavelet coherence, "
               "partial coherence and red-noise Monte Carlo significance"};
  app.set_version_flag("--version", wcoh::kVersion);
  app.require_subcommand(1);

  // transform
  auto* cmd_transform = app.add_subcommand("transform", "quantile-transform a series to (0,1)");
  std::string t_in, t_out, t_date = "date", t_value = "value", t_fill = "none";
  cmd_transform->add_option("--in", t_in, "input CSV")->required();
  cmd_transform->add_option("--out", t_out, "output CSV")->required();
  cmd_transform->add_option("--date-column", t_date, "date column name");
  cmd_transform->add_option("--value-column", t_value, "value column name");
  cmd_transform->add_option("--fill", t_fill, "gap policy: none or forward");
  std::string t_out_col = "value";
  cmd_transform->add_option("--out-column", t_out_col, "column name in the output CSV");

  // chain-trends
  auto* cmd_chain = app.add_subcommand("chain-trends",
                                       "chain overlapping search-interest blocks into one series");
  std::vector<std::string> c_in;
  std::string c_out, c_date = "date", c_value = "value";
  int c_window = 30;
  cmd_chain->add_option("--in", c_in, "block CSV files in start-date order")->required();
  cmd_chain->add_option("--out", c_out, "output CSV")->required();
  cmd_chain->add_option("--overlap-window", c_window, "rescaling window in days (default 30)");
  cmd_chain->add_option("--date-column", c_date, "date column name");
  cmd_chain->add_option("--value-column", c_value, "value column name");
  std::string c_out_col = "value";
  cmd_chain->add_option("--out-column", c_out_col, "column name in the output CSV");

  // derive
  auto* cmd_derive = app.add_subcommand("derive", "elementwise ratio of two aligned series");
  std::string d_kind, d_num, d_den, d_out, d_date = "date", d_value = "value", d_fill = "none";
  cmd_derive->add_option("--kind", d_kind, "ratio or per_event_price")->required();
  cmd_derive->add_option("--numerator", d_num, "numerator CSV")->required();
  cmd_derive->add_option("--denominator", d_den, "denominator CSV")->required();
  cmd_derive->add_option("--out", d_out, "output CSV")->required();
  cmd_derive->add_option("--date-column", d_date, "date column name");
  cmd_derive->add_option("--value-column", d_value, "value column name");
  cmd_derive->add_option("--fill", d_fill, "gap policy: none or forward");
  std::string d_out_col = "value";
  cmd_derive->add_option("--out-column", d_out_col, "column name in the output CSV");

  // cwt
  auto* cmd_cwt = app.add_subcommand("cwt", "wavelet power map of one series");
  std::string w_in, w_outdir, w_date = "date", w_value = "value";
  ConfigFlags w_cfg;
  RenderFlags w_render;
  cmd_cwt->add_option("--in", w_in, "input CSV")->required();
  cmd_cwt->add_option("--out", w_outdir, "output bundle directory")->required();
  cmd_cwt->add_option("--date-column", w_date, "date column name");
  cmd_cwt->add_option("--value-column", w_value, "value column name");
  w_cfg.add_to(cmd_cwt);
  w_render.add_to(cmd_cwt);

  // wtc
  auto* cmd_wtc = app.add_subcommand("wtc", "squared wavelet coherence of a pair, with "
                                            "Monte Carlo significance");
  std::string p_x, p_y, p_outdir, p_label;
  ConfigFlags p_cfg;
  RenderFlags p_render;
  cmd_wtc->add_option("--x", p_x, "first series CSV")->required();
  cmd_wtc->add_option("--y", p_y, "second series CSV")->required();
  cmd_wtc->add_option("--out", p_outdir, "output directory (bundle goes to <out>/<label>)")
      ->required();
  cmd_wtc->add_option("--label", p_label, "bundle label (default from file names)");
  p_cfg.add_to(cmd_wtc);
  p_render.add_to(cmd_wtc);

  // pwc
  auto* cmd_pwc = app.add_subcommand("pwc", "partial wavelet coherence of --x and --y "
                                            "controlling for --confounder");
  std::string q_x, q_y, q_conf, q_outdir, q_label;
  ConfigFlags q_cfg;
  RenderFlags q_render;
  cmd_pwc->add_option("--x", q_x, "first series CSV")->required();
  cmd_pwc->add_option("--y", q_y, "second series CSV")->required();
  cmd_pwc->add_option("--confounder", q_conf, "confounder series CSV")->required();
  cmd_pwc->add_option("--out", q_outdir, "output directory")->required();
  cmd_pwc->add_option("--label", q_label, "bundle label");
  q_cfg.add_to(cmd_pwc);
  q_render.add_to(cmd_pwc);

  // render
  auto* cmd_render = app.add_subcommand("render", "re-render an exported map");
  std::string r_map, r_sig, r_out;
  RenderFlags r_render;
  cmd_render->add_option("--map", r_map, "map.json produced by export")->required();
  cmd_render->add_option("--significance", r_sig, "significance.json (optional)");
  cmd_render->add_option("--out", r_out, "output image path")->required();
  r_render.add_to(cmd_render);

  // replicate
  auto* cmd_repl = app.add_subcommand("replicate", "run every entry of a replication manifest");
  std::string m_manifest, m_outdir;
  std::size_t m_jobs = 1;
  ConfigFlags m_cfg;
  RenderFlags m_render;
  cmd_repl->add_option("--manifest", m_manifest, "manifest JSON")->required();
  cmd_repl->add_option("--out", m_outdir, "output directory")->required();
  cmd_repl->add_option("--jobs", m_jobs, "parallel entries (default 1)");
  m_cfg.add_to(cmd_repl);
  m_render.add_to(cmd_repl);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage problems exit 1
  }

  try {
    if (*cmd_transform) {
      const wcoh::TimeSeries ts = wcoh::load_csv(t_in, t_date, t_value, parse_fill(t_fill));
      wcoh::TimeSeries out = wcoh::quantile_transform(ts);
      const std::string produced = out.name;
      out.name = t_out_col;
      wcoh::write_csv(out, t_out);
      std::cout << "wrote " << t_out << " (" << out.size() << " rows, " << produced << ")\n";
    } else if (*cmd_chain) {
      std::vector<wcoh::TrendsBlock> blocks;
      for (const auto& f : c_in) blocks.push_back(wcoh::load_trends_block(f, c_date, c_value));
      wcoh::TimeSeries chained = wcoh::chain_trends_blocks(blocks, c_window);
      chained.name = c_out_col;
      wcoh::write_csv(chained, c_out);
      std::cout << "wrote " << c_out << " (" << chained.size() << " rows, "
                << chained.start.iso() << ".." << chained.last().iso() << ")\n";
    } else if (*cmd_derive) {
      wcoh::DeriveKind kind;
      if (d_kind == "ratio") kind = wcoh::DeriveKind::ratio;
      else if (d_kind == "per_event_price") kind = wcoh::DeriveKind::per_event_price;
      else throw wcoh::config_error("kind must be 'ratio' or 'per_event_price', got '" + d_kind + "'");
      const auto fill = parse_fill(d_fill);
      const auto [a, b] = wcoh::align_intersect(wcoh::load_csv(d_num, d_date, d_value, fill),
                                                wcoh::load_csv(d_den, d_date, d_value, fill));
      wcoh::TimeSeries out = wcoh::derive_series(kind, a, b);
      const std::string produced = out.name;
      out.name = d_out_col;
      wcoh::write_csv(out, d_out);
      std::cout << "wrote " << d_out << " (" << produced << ")\n";
    } else if (*cmd_cwt) {
      const wcoh::AnalysisConfig cfg = w_cfg.resolve();
      echo_config(cfg);
      wcoh::TimeSeries ts = wcoh::load_csv(w_in, w_date, w_value, cfg.fill);
      if (cfg.transform == wcoh::TransformKind::quantile) ts = wcoh::quantile_transform(ts);
      const wcoh::ScaleGrid grid = wcoh::build_scale_grid(
          ts.size(), ts.step_days, cfg.s0, cfg.dj, cfg.max_period_fraction, cfg.wavelet);
      const wcoh::CwtMatrix w = wcoh::cwt_transform(ts, grid, cfg.wavelet, cfg.padding, cfg.detrend);
      wcoh::CoherenceMap map = wcoh::xwt_power(w, w);
      map.meta = cfg;
      const fs::path dir = w_outdir;
      fs::create_directories(dir);
      wcoh::export_grid(map, nullptr, dir / "map.csv", wcoh::GridFormat::csv);
      wcoh::export_grid(map, nullptr, dir / "map.json", wcoh::GridFormat::json);
      const wcoh::RenderOptions opts = w_render.resolve();
      std::ofstream svg(dir / "map.svg");
      svg << wcoh::render_map_svg(map, nullptr, opts);
      if (opts.format == wcoh::ImageFormat::png)
        write_bytes(dir / "map.png", wcoh::render_map_png(map, nullptr, opts));
      const json run{{"tool", "wcoh"},
                     {"version", wcoh::kVersion},
                     {"kind", "xwt_power"},
                     {"config", wcoh::config_to_json(cfg)},
                     {"inputs", json::array({{{"path", w_in},
                                              {"sha256", wcoh::sha256_file(w_in)},
                                              {"rows", ts.size()},
                                              {"start", ts.start.iso()},
                                              {"end", ts.last().iso()}}})},
                     {"outputs", json::array({"map.csv", "map.json", "map.svg"})}};
      std::ofstream run_out(dir / "run.json");
      run_out << run.dump(1) << "\n";
      std::cout << "wrote power map bundle to " << dir.string() << "\n";
    } else if (*cmd_wtc) {
      const wcoh::AnalysisConfig cfg = p_cfg.resolve();
      echo_config(cfg);
      const wcoh::RunResult r =
          wcoh::run_pair(p_x, p_y, cfg, p_outdir, p_label, p_render.resolve());
      std::cout << "wrote bundle " << r.bundle_dir.string() << " (significant COI fraction "
                << r.significance.significant_coi_fraction << ")\n";
    } else if (*cmd_pwc) {
      const wcoh::AnalysisConfig cfg = q_cfg.resolve();
      echo_config(cfg);
      wcoh::ManifestEntry entry;
      entry.kind = wcoh::MapKind::pwc;
      entry.label = q_label.empty()
                        ? fs::path(q_x).stem().string() + "_vs_" + fs::path(q_y).stem().string() +
                              "_ctrl_" + fs::path(q_conf).stem().string()
                        : q_label;
      entry.x.path = q_x;
      entry.y.path = q_y;
      entry.confounder = wcoh::SeriesRecipe{};
      entry.confounder->path = q_conf;
      const wcoh::RunResult r = wcoh::run_entry(entry, cfg, q_outdir, q_render.resolve());
      std::cout << "wrote bundle " << r.bundle_dir.string() << " (significant COI fraction "
                << r.significance.significant_coi_fraction << ")\n";
    } else if (*cmd_render) {
      std::optional<wcoh::SignificanceResult> embedded;
      const wcoh::CoherenceMap map = wcoh::import_grid_json(r_map, &embedded);
      std::optional<wcoh::SignificanceResult> sig = embedded;
      if (!r_sig.empty()) sig = wcoh::import_significance_json(r_sig);
      const wcoh::RenderOptions opts = r_render.resolve();
      if (opts.format == wcoh::ImageFormat::png)
        write_bytes(r_out, wcoh::render_map_png(map, sig ? &*sig : nullptr, opts));
      else {
        std::ofstream out(r_out);
        if (!out) throw wcoh::data_error("cannot write file: " + r_out);
        out << wcoh::render_map_svg(map, sig ? &*sig : nullptr, opts);
      }
      std::cout << "wrote " << r_out << "\n";
    } else if (*cmd_repl) {
      const wcoh::AnalysisConfig cfg = m_cfg.resolve();
      echo_config(cfg);
      const wcoh::ReplicationManifest manifest = wcoh::ReplicationManifest::load(m_manifest);
      const auto outcomes =
          wcoh::run_replication(manifest, cfg, m_outdir, m_jobs, m_render.resolve());
      std::size_t failed = 0;
      for (const auto& o : outcomes) {
        if (o.ok)
          std::cout << "[ok]     " << o.label << " significant COI fraction "
                    << o.significant_coi_fraction << "\n";
        else {
          std::cout << "[failed] " << o.label << ": " << o.error << "\n";
          ++failed;
        }
      }
      std::cout << outcomes.size() - failed << "/" << outcomes.size() << " entries succeeded\n";
      if (failed) return 3;
    }
  } catch (const wcoh::config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const wcoh::data_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
