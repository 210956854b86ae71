// symbiolife command line: run, measure, report, validate.
//
// Exit codes: 0 ok, 1 bad configuration or usage, 2 I/O failure, 3 malformed data.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "symbiolife/config.hpp"
#include "symbiolife/errors.hpp"
#include "symbiolife/experiment.hpp"

using namespace symbiolife;
namespace fs = std::filesystem;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitData = 3;

// Game factors of the experiment that produced `dir`, found in its config.cfg.
std::optional<ExperimentConfig> experiment_config(const fs::path& dir) {
  for (const fs::path& p : {dir / "config.cfg", dir.parent_path() / "config.cfg"}) {
    if (fs::exists(p)) return load_config(p);
  }
  return std::nullopt;
}

int do_run(const std::string& config_path, const std::string& out, bool full, std::optional<int> runs,
           std::optional<std::uint64_t> seed, bool quiet) {
  ExperimentConfig c = load_config(config_path);
  if (full) c = full_scale(c);
  if (runs) c.num_runs = *runs;
  if (seed) c.rng_seed = *seed;
  validate(c);
  const fs::path dir = resolve_output_dir(out.empty() ? fs::path(c.output_dir) / c.layer_name() : fs::path(out));
  const RunSummary s = cmd_run(c, dir, quiet ? nullptr : &std::cerr);
  std::cout << s.directory.string() << '\n';
  return 0;
}

int do_measure(const std::vector<std::string>& inputs, const std::string& kind, MeasureOptions opt,
               const std::string& pattern_dir, const std::string& out) {
  std::vector<RunArchive> runs;
  std::optional<GameFactors> factors;
  for (const auto& input : inputs) {
    for (const auto& dir : find_run_dirs(input)) {
      runs.push_back(read_archive_csv(dir / "archive.csv"));
      if (const auto c = experiment_config(dir)) {
        const GameFactors f = c->factors();
        if (factors && (factors->width_factor != f.width_factor || factors->height_factor != f.height_factor ||
                        factors->time_factor != f.time_factor)) {
          throw ConfigError("width_factor", "inputs were produced with different game factors");
        }
        factors = f;
      }
    }
  }
  if (factors) opt.factors = *factors;

  std::ofstream file;
  if (!out.empty()) {
    file.open(out, std::ios::binary);
    if (!file) throw IoError("cannot write " + out);
  }
  std::ostream& os = out.empty() ? std::cout : file;

  if (kind == "vs-random") {
    write_measure_csv(os, measure_vs_random(runs, opt));
  } else if (kind == "vs-past-winners") {
    write_measure_csv(os, measure_vs_past_winners(runs, opt));
  } else {
    std::string dir = pattern_dir;
    if (dir.empty()) {
      if (const auto c = experiment_config(find_run_dirs(inputs.front()).front()); c && !c->pattern_dir.empty())
        dir = c->pattern_dir;
    }
    if (dir.empty()) throw ConfigError("pattern_dir", "vs-patterns needs --patterns or pattern_dir in the config");
    write_pattern_table(os, measure_vs_patterns(runs, load_pattern_dir(dir), opt));
  }
  if (file.is_open() && !file) throw IoError("write failed for " + out);
  return 0;
}

int do_report(const std::vector<std::string>& inputs, const std::string& out) {
  std::vector<fs::path> paths(inputs.begin(), inputs.end());
  for (const auto& p : cmd_report(load_report_inputs(paths), resolve_output_dir(out))) std::cout << p.string() << '\n';
  return 0;
}

int do_validate(const std::string& config_path) {
  const ExperimentConfig c = load_config(config_path);
  std::cout << to_config_text(c);
  char hash[24];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(config_hash(c)));
  std::cout << "# layer " << c.layer_name() << ", hash " << hash << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evolve Immigration Game seeds and analyse the results."};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string config_path, out;
  bool full = false, quiet = false;
  std::optional<int> runs;
  std::optional<std::uint64_t> seed;
  auto* run = app.add_subcommand("run", "Evolve seeds for every run of an experiment");
  run->add_option("config", config_path, "Configuration file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out, "Experiment directory; must not exist (default: output_dir/<layer>)");
  run->add_flag("--full-scale", full, "Use the published protocol: default parameters and 12 runs");
  run->add_option("--runs", runs, "Override num_runs")->check(CLI::PositiveNumber);
  run->add_option("--seed", seed, "Override rng_seed");
  run->add_flag("--quiet", quiet, "No per-generation progress on stderr");

  std::vector<std::string> inputs;
  std::string kind = "vs-random", patterns, measure_out;
  MeasureOptions opt;
  auto* measure = app.add_subcommand("measure", "Score archived elites with an external fitness measure");
  measure->add_option("inputs", inputs, "Experiment or run directories")->required()->check(CLI::ExistingDirectory);
  measure->add_option("--measure", kind, "vs-random, vs-past-winners or vs-patterns")
      ->check(CLI::IsMember({"vs-random", "vs-past-winners", "vs-patterns"}));
  measure->add_option("--top", opt.top, "Elite members per generation")->check(CLI::PositiveNumber);
  measure->add_option("--opponents", opt.opponents, "Random opponents per elite member")->check(CLI::PositiveNumber);
  measure->add_option("--every", opt.every, "Generation stride")->check(CLI::PositiveNumber);
  measure->add_option("--games", opt.games_per_pattern, "Games per champion and pattern")->check(CLI::PositiveNumber);
  measure->add_option("--area-limit", opt.area_limit, "Largest pattern bounding box")->check(CLI::PositiveNumber);
  measure->add_option("--patterns", patterns, "Directory of .rle files")->check(CLI::ExistingDirectory);
  measure->add_option("--seed", opt.rng_seed, "Seed for random opponents");
  measure->add_option("--out", measure_out, "Output CSV (default: stdout)");

  std::vector<std::string> report_inputs;
  std::string report_out = "report";
  auto* report = app.add_subcommand("report", "Charts and summary tables from runs and measure CSVs");
  report->add_option("inputs", report_inputs, "Directories or CSV files")->required();
  report->add_option("--out", report_out, "Output directory");

  std::string validate_path;
  auto* check = app.add_subcommand("validate", "Check a configuration and print its canonical form");
  check->add_option("config", validate_path, "Configuration file")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*run) return do_run(config_path, out, full, runs, seed, quiet);
    if (*measure) return do_measure(inputs, kind, opt, patterns, measure_out);
    if (*report) return do_report(report_inputs, report_out);
    if (*check) return do_validate(validate_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const MissingArchive& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const Error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitUsage;
}
