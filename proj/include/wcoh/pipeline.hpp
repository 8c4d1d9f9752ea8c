#ifndef WCOH_PIPELINE_HPP
#define WCOH_PIPELINE_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "wcoh/coherence.hpp"
#include "wcoh/config.hpp"
#include "wcoh/render.hpp"
#include "wcoh/significance.hpp"

namespace wcoh {

// How one analysis input is produced: read directly, derived from two
// files, or chained from search-interest blocks.
struct SeriesRecipe {
  enum class Source { file, derive, chain };
  Source source = Source::file;
  std::filesystem::path path;                 // file
  DeriveKind derive_kind = DeriveKind::ratio; // derive
  std::filesystem::path numerator, denominator;
  std::vector<std::filesystem::path> blocks;  // chain
  int overlap_window = 30;
  std::string date_column = "date";
  std::string value_column = "value";

  TimeSeries load(FillPolicy fill) const;
  std::vector<std::filesystem::path> referenced_files() const;
};

struct ManifestEntry {
  std::string label;
  MapKind kind = MapKind::wtc;  // wtc or pwc
  SeriesRecipe x;               // first series (y of the partial-coherence formula)
  SeriesRecipe y;               // second series
  std::optional<SeriesRecipe> confounder;  // pwc only
  std::optional<Date> window_start, window_end;  // optional date clamp
};

struct ReplicationManifest {
  std::vector<ManifestEntry> entries;

  // Throws config_error on schema problems or duplicate labels. Missing
  // input files are detected per entry at run time, not here.
  static ReplicationManifest load(const std::filesystem::path& path);
};

struct RunResult {
  std::string label;
  CoherenceMap map;
  SignificanceResult significance;
  std::filesystem::path bundle_dir;
};

// Full pipeline for one pair: load, align, transform, CWT, wtc, Monte Carlo
// significance, export (map.csv/map.json/map.svg/significance.json/run.json).
// Errors carry the failing stage name.
RunResult run_pair(const std::filesystem::path& x_path, const std::filesystem::path& y_path,
                   const AnalysisConfig& cfg, const std::filesystem::path& out_dir,
                   const std::string& label = "", const RenderOptions& render = {});

// Same pipeline, driven by recipes; kind pwc loads the confounder as well.
RunResult run_entry(const ManifestEntry& entry, const AnalysisConfig& cfg,
                    const std::filesystem::path& out_dir, const RenderOptions& render = {});

struct EntryOutcome {
  std::string label;
  bool ok = false;
  std::string error;
  double significant_coi_fraction = 0.0;
};

// Runs every entry, isolating failures; writes <out_dir>/index.json with
// per-entry status and significant-area fraction inside the COI.
std::vector<EntryOutcome> run_replication(const ReplicationManifest& manifest,
                                          const AnalysisConfig& cfg,
                                          const std::filesystem::path& out_dir,
                                          std::size_t jobs = 1, const RenderOptions& render = {});

}  // namespace wcoh

#endif
