#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "symbiolife/config.hpp"
#include "symbiolife/fitness_measures.hpp"
#include "symbiolife/population.hpp"

namespace symbiolife {

inline constexpr const char* kVersion = "0.1.0";

// ---- CSV schemas ------------------------------------------------------------
//
// archive.csv        layer,run,generation,rank,id,rows,cols,area,density,relative_fitness,origin,birth_generation,genome
// fusion_events.csv  layer,run,generation,birth,part_a,part_b,part_a_fitness,part_b_fitness,whole_fitness,
//                    classification,accepted,rejection,whole_area,shuffled
// metrics.csv        layer,run,generation,mean_area,mean_density,diversity,mean_elite_fitness,max_area,
//                    fusion_attempts,fusion_accepted,fission_births
// measure CSV        layer,run,generation,rank,measure,value   (rank empty for per-generation values)
//
// Genomes use the compact row form: rows of 0/1 joined by '/'.

extern const char* const kArchiveHeader;
extern const char* const kFusionHeader;
extern const char* const kMetricsHeader;
extern const char* const kMeasureHeader;

void write_archive_csv(std::ostream& out, const EliteArchive& archive, const std::string& layer, int run);
void write_fusion_csv(std::ostream& out, const std::vector<FusionEvent>& events, const std::string& layer, int run);
void write_metrics_csv(std::ostream& out, const std::vector<GenerationMetrics>& metrics, const std::string& layer,
                       int run);

struct RunArchive {
  std::string layer;
  int run = 0;
  EliteArchive archive;
};

/// Throws IoError if the file cannot be read, MalformedCsv on bad content.
RunArchive read_archive_csv(const std::filesystem::path& path);

struct MetricsRow {
  std::string layer;
  int run = 0;
  GenerationMetrics metrics;
};
std::vector<MetricsRow> read_metrics_csv(const std::filesystem::path& path);

struct FusionRow {
  std::string layer;
  int run = 0;
  FusionEvent event;
};
std::vector<FusionRow> read_fusion_csv(const std::filesystem::path& path);

struct MeasureRow {
  std::string layer;
  int run = 0;
  int generation = 0;
  int rank = -1;  // -1 for per-generation values
  std::string measure;
  double value = 0.0;
};
void write_measure_csv(std::ostream& out, const std::vector<MeasureRow>& rows);
std::vector<MeasureRow> read_measure_csv(const std::filesystem::path& path);

// ---- run ----------------------------------------------------------------------

/// Seed for run k: the (k+1)-th output of a SplitMix64 stream started at the master seed.
std::uint64_t run_seed(std::uint64_t master, int run);

/// Resolves a relative output directory against $SYMBIOLIFE_OUTPUT_ROOT when it is set.
std::filesystem::path resolve_output_dir(const std::filesystem::path& dir);

struct RunSummary {
  std::filesystem::path directory;
  std::vector<std::filesystem::path> run_dirs;
};

/// Executes config.num_runs independent runs into `out_dir`, which must not exist:
///   out_dir/config.cfg, out_dir/manifest.json, out_dir/run_NN/{archive,fusion_events,metrics}.csv
/// `log` receives one progress line per finished generation when non-null.
RunSummary cmd_run(const ExperimentConfig& config, const std::filesystem::path& out_dir, std::ostream* log = nullptr);

/// Run directories below `path`: itself if it holds archive.csv, else its run_* children, sorted.
std::vector<std::filesystem::path> find_run_dirs(const std::filesystem::path& path);

// ---- measure ------------------------------------------------------------------

struct MeasureOptions {
  int top = 10;
  int opponents = 50;
  int every = 1;  // generation stride; the final generation is always included
  int games_per_pattern = 20;
  int area_limit = 10000;
  std::uint64_t rng_seed = 1;
  GameFactors factors;
};

/// Generations g with g % every == 0, plus the last generation.
std::vector<int> sampled_generations(const EliteArchive& archive, int every);

/// One row per elite member (top ranks) per sampled generation.
std::vector<MeasureRow> measure_vs_random(const std::vector<RunArchive>& runs, const MeasureOptions& options);

/// f_n per sampled generation.
std::vector<MeasureRow> measure_vs_past_winners(const std::vector<RunArchive>& runs, const MeasureOptions& options);

struct PatternTable {
  std::vector<std::string> layers;    // column order
  std::vector<std::string> patterns;  // row order
  std::vector<int> areas;
  std::vector<std::vector<double>> percent;  // [pattern][layer], evolved side's win percentage
  std::vector<double> average;               // per layer, mean over patterns
};

/// Champions are each run's rank-0 seed in its final generation, grouped by layer.
PatternTable measure_vs_patterns(const std::vector<RunArchive>& runs, const std::vector<RlePattern>& patterns,
                                 const MeasureOptions& options);
void write_pattern_table(std::ostream& out, const PatternTable& table);

// ---- report -------------------------------------------------------------------

struct ReportInputs {
  std::vector<MetricsRow> metrics;
  std::vector<FusionRow> fusion;
  std::vector<MeasureRow> measures;
};

/// Accepts run directories, experiment directories and CSV files; CSVs are told apart by header.
ReportInputs load_report_inputs(const std::vector<std::filesystem::path>& inputs);

struct ChartSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Self-contained SVG line chart.
std::string render_line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                              const std::vector<ChartSeries>& series);

/// Writes charts and summary tables into out_dir (created if needed). Returns the files written.
std::vector<std::filesystem::path> cmd_report(const ReportInputs& inputs, const std::filesystem::path& out_dir);

}  // namespace symbiolife
