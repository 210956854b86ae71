#include "symbiolife/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "json.hpp"
#include "symbiolife/errors.hpp"

namespace symbiolife {

const char* const kArchiveHeader =
    "layer,run,generation,rank,id,rows,cols,area,density,relative_fitness,origin,birth_generation,genome";
const char* const kFusionHeader =
    "layer,run,generation,birth,part_a,part_b,part_a_fitness,part_b_fitness,whole_fitness,classification,accepted,"
    "rejection,whole_area,shuffled";
const char* const kMetricsHeader =
    "layer,run,generation,mean_area,mean_density,diversity,mean_elite_fitness,max_area,fusion_attempts,"
    "fusion_accepted,fission_births";
const char* const kMeasureHeader = "layer,run,generation,rank,measure,value";

namespace {

std::string num(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

// ---- CSV reading ----

struct CsvFile {
  std::filesystem::path path;
  std::vector<std::vector<std::string>> rows;
};

std::vector<std::string> split(const std::string& line, char sep = ',') {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

CsvFile read_csv(const std::filesystem::path& path, const char* header) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  CsvFile f{path, {}};
  std::string line;
  if (!std::getline(in, line)) throw MalformedCsv(path.string() + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) throw MalformedCsv(path.string() + ": unexpected header");
  const std::size_t columns = split(header).size();
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split(line);
    if (fields.size() != columns) {
      throw MalformedCsv(path.string() + ":" + std::to_string(line_no) + ": expected " + std::to_string(columns) +
                         " fields");
    }
    f.rows.push_back(std::move(fields));
  }
  return f;
}

template <typename T>
T field(const CsvFile& f, std::size_t row, std::size_t col) {
  const std::string& s = f.rows[row][col];
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw MalformedCsv(f.path.string() + ": bad value '" + s + "' in row " + std::to_string(row + 2));
  }
  return v;
}

bool flag_field(const CsvFile& f, std::size_t row, std::size_t col) {
  const int v = field<int>(f, row, col);
  if (v != 0 && v != 1) throw MalformedCsv(f.path.string() + ": expected 0 or 1 in row " + std::to_string(row + 2));
  return v == 1;
}

FusionClass fusion_class_from_string(const std::string& s, const std::filesystem::path& path) {
  for (auto c : {FusionClass::NoPartsBenefit, FusionClass::OnePartBenefits, FusionClass::BothPartsBenefit})
    if (s == to_string(c)) return c;
  throw MalformedCsv(path.string() + ": unknown classification '" + s + "'");
}

FusionRejection rejection_from_string(const std::string& s, const std::filesystem::path& path) {
  for (auto r : {FusionRejection::None, FusionRejection::AreaLimit, FusionRejection::NoMutualBenefit})
    if (s == to_string(r)) return r;
  throw MalformedCsv(path.string() + ": unknown rejection '" + s + "'");
}

std::string utc_timestamp(std::chrono::system_clock::time_point t) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  if (!out) throw IoError("write failed for " + path.string());
}

std::string hex64(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << v;
  return s.str();
}

}  // namespace

// ---- CSV writing ----------------------------------------------------------------

void write_archive_csv(std::ostream& out, const EliteArchive& archive, const std::string& layer, int run) {
  out << kArchiveHeader << '\n';
  for (int g : archive.generations()) {
    for (const auto& r : archive.generation(g)) {
      out << layer << ',' << run << ',' << r.generation << ',' << r.rank << ',' << r.id << ',' << r.genome.rows()
          << ',' << r.genome.cols() << ',' << r.genome.area() << ',' << num(r.genome.density()) << ','
          << num(r.relative_fitness) << ',' << to_string(r.origin) << ',' << r.birth_generation << ','
          << r.genome.to_compact() << '\n';
    }
  }
}

void write_fusion_csv(std::ostream& out, const std::vector<FusionEvent>& events, const std::string& layer, int run) {
  out << kFusionHeader << '\n';
  for (const auto& e : events) {
    out << layer << ',' << run << ',' << e.generation << ',' << e.birth << ',' << e.part_a << ',' << e.part_b << ','
        << num(e.part_a_fitness) << ',' << num(e.part_b_fitness) << ','
        << (e.whole_fitness ? num(*e.whole_fitness) : std::string()) << ','
        << (e.classification ? to_string(*e.classification) : "") << ',' << (e.accepted ? 1 : 0) << ','
        << to_string(e.rejection) << ',' << e.whole_area << ',' << (e.shuffled ? 1 : 0) << '\n';
  }
}

void write_metrics_csv(std::ostream& out, const std::vector<GenerationMetrics>& metrics, const std::string& layer,
                       int run) {
  out << kMetricsHeader << '\n';
  for (const auto& m : metrics) {
    out << layer << ',' << run << ',' << m.generation << ',' << num(m.mean_area) << ',' << num(m.mean_density) << ','
        << num(m.diversity) << ',' << num(m.mean_elite_fitness) << ',' << m.max_area_bound << ','
        << m.fusion_attempts << ',' << m.fusion_accepted << ',' << m.fission_births << '\n';
  }
}

void write_measure_csv(std::ostream& out, const std::vector<MeasureRow>& rows) {
  out << kMeasureHeader << '\n';
  for (const auto& r : rows) {
    out << r.layer << ',' << r.run << ',' << r.generation << ',' << (r.rank >= 0 ? std::to_string(r.rank) : "")
        << ',' << r.measure << ',' << num(r.value) << '\n';
  }
}

// ---- CSV reading ----------------------------------------------------------------

RunArchive read_archive_csv(const std::filesystem::path& path) {
  const CsvFile f = read_csv(path, kArchiveHeader);
  RunArchive out;
  for (std::size_t i = 0; i < f.rows.size(); ++i) {
    const auto& row = f.rows[i];
    if (i == 0) {
      out.layer = row[0];
      out.run = field<int>(f, i, 1);
    } else if (row[0] != out.layer || field<int>(f, i, 1) != out.run) {
      throw MalformedCsv(path.string() + ": mixes several runs");
    }
    EliteRecord r;
    r.generation = field<int>(f, i, 2);
    r.rank = field<int>(f, i, 3);
    r.id = field<IndividualId>(f, i, 4);
    try {
      r.genome = SeedGenome::from_compact(row[12]);
    } catch (const MalformedSeed& e) {
      throw MalformedCsv(path.string() + ": " + e.what());
    }
    if (r.genome.rows() != field<int>(f, i, 5) || r.genome.cols() != field<int>(f, i, 6)) {
      throw MalformedCsv(path.string() + ": genome dims disagree with rows/cols in row " + std::to_string(i + 2));
    }
    r.relative_fitness = field<double>(f, i, 9);
    r.origin = origin_from_string(row[10]);
    r.birth_generation = field<int>(f, i, 11);
    out.archive.add(std::move(r));
  }
  if (out.archive.empty()) throw MalformedCsv(path.string() + ": no records");
  return out;
}

std::vector<MetricsRow> read_metrics_csv(const std::filesystem::path& path) {
  const CsvFile f = read_csv(path, kMetricsHeader);
  std::vector<MetricsRow> out;
  for (std::size_t i = 0; i < f.rows.size(); ++i) {
    MetricsRow r;
    r.layer = f.rows[i][0];
    r.run = field<int>(f, i, 1);
    r.metrics.generation = field<int>(f, i, 2);
    r.metrics.mean_area = field<double>(f, i, 3);
    r.metrics.mean_density = field<double>(f, i, 4);
    r.metrics.diversity = field<double>(f, i, 5);
    r.metrics.mean_elite_fitness = field<double>(f, i, 6);
    r.metrics.max_area_bound = field<int>(f, i, 7);
    r.metrics.fusion_attempts = field<int>(f, i, 8);
    r.metrics.fusion_accepted = field<int>(f, i, 9);
    r.metrics.fission_births = field<int>(f, i, 10);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<FusionRow> read_fusion_csv(const std::filesystem::path& path) {
  const CsvFile f = read_csv(path, kFusionHeader);
  std::vector<FusionRow> out;
  for (std::size_t i = 0; i < f.rows.size(); ++i) {
    const auto& row = f.rows[i];
    FusionRow r;
    r.layer = row[0];
    r.run = field<int>(f, i, 1);
    FusionEvent& e = r.event;
    e.generation = field<int>(f, i, 2);
    e.birth = field<std::uint64_t>(f, i, 3);
    e.part_a = field<IndividualId>(f, i, 4);
    e.part_b = field<IndividualId>(f, i, 5);
    e.part_a_fitness = field<double>(f, i, 6);
    e.part_b_fitness = field<double>(f, i, 7);
    if (!row[8].empty()) e.whole_fitness = field<double>(f, i, 8);
    if (!row[9].empty()) e.classification = fusion_class_from_string(row[9], path);
    e.accepted = flag_field(f, i, 10);
    e.rejection = rejection_from_string(row[11], path);
    e.whole_area = field<int>(f, i, 12);
    e.shuffled = flag_field(f, i, 13);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<MeasureRow> read_measure_csv(const std::filesystem::path& path) {
  const CsvFile f = read_csv(path, kMeasureHeader);
  std::vector<MeasureRow> out;
  for (std::size_t i = 0; i < f.rows.size(); ++i) {
    MeasureRow r;
    r.layer = f.rows[i][0];
    r.run = field<int>(f, i, 1);
    r.generation = field<int>(f, i, 2);
    r.rank = f.rows[i][3].empty() ? -1 : field<int>(f, i, 3);
    r.measure = f.rows[i][4];
    r.value = field<double>(f, i, 5);
    out.push_back(std::move(r));
  }
  return out;
}

// ---- run ------------------------------------------------------------------------

std::uint64_t run_seed(std::uint64_t master, int run) {
  // splitmix64() advances its argument by the golden gamma before mixing.
  return splitmix64(master + static_cast<std::uint64_t>(run) * 0x9e3779b97f4a7c15ULL);
}

std::filesystem::path resolve_output_dir(const std::filesystem::path& dir) {
  if (dir.is_absolute()) return dir;
  if (const char* root = std::getenv("SYMBIOLIFE_OUTPUT_ROOT"); root != nullptr && *root != '\0') {
    return std::filesystem::path(root) / dir;
  }
  return dir;
}

RunSummary cmd_run(const ExperimentConfig& config, const std::filesystem::path& out_dir, std::ostream* log) {
  validate(config);
  std::error_code ec;
  if (std::filesystem::exists(out_dir, ec)) throw IoError("output directory already exists: " + out_dir.string());
  if (out_dir.has_parent_path()) std::filesystem::create_directories(out_dir.parent_path(), ec);
  if (!std::filesystem::create_directory(out_dir, ec)) {
    throw IoError("cannot create output directory " + out_dir.string() + (ec ? ": " + ec.message() : ""));
  }

  const auto started = std::chrono::system_clock::now();
  const auto wall_start = std::chrono::steady_clock::now();
  write_file(out_dir / "config.cfg", to_config_text(config));

  const std::string layer = config.layer_name();
  RunSummary summary{out_dir, {}};
  nlohmann::json runs = nlohmann::json::array();
  for (int k = 0; k < config.num_runs; ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "run_%02d", k);
    const std::filesystem::path dir = out_dir / name;
    std::filesystem::create_directory(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

    const std::uint64_t seed = run_seed(config.rng_seed, k);
    Rng rng(seed);
    const RunArtifacts artifacts = run_experiment(config, rng, [&](const Population& pop, int generation) {
      if (log != nullptr) {
        *log << layer << " run " << k << " generation " << generation << '/' << config.num_generations
             << " mean_fitness " << pop.mean_relative_fitness() << '\n';
      }
    });

    std::ostringstream archive, fusion, metrics;
    write_archive_csv(archive, artifacts.archive, layer, k);
    write_fusion_csv(fusion, artifacts.fusion_events, layer, k);
    write_metrics_csv(metrics, artifacts.metrics, layer, k);
    write_file(dir / "archive.csv", archive.str());
    write_file(dir / "fusion_events.csv", fusion.str());
    write_file(dir / "metrics.csv", metrics.str());
    summary.run_dirs.push_back(dir);

    runs.push_back({{"run", k},
                    {"seed", seed},
                    {"archive", std::string(name) + "/archive.csv"},
                    {"fusion_events", std::string(name) + "/fusion_events.csv"},
                    {"metrics", std::string(name) + "/metrics.csv"}});
  }

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  nlohmann::json manifest = {
      {"software", "symbiolife"},
      {"version", kVersion},
      {"layer", layer},
      {"config_file", "config.cfg"},
      {"config_hash", hex64(config_hash(config))},
      {"master_seed", config.rng_seed},
      {"seed_rule", "run k uses the (k+1)-th SplitMix64 output from the master seed"},
      {"runs", runs},
      {"started_at", utc_timestamp(started)},
      {"finished_at", utc_timestamp(std::chrono::system_clock::now())},
      {"wall_seconds", wall},
  };
  write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
  return summary;
}

std::vector<std::filesystem::path> find_run_dirs(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_directory(path, ec)) throw IoError("not a directory: " + path.string());
  if (std::filesystem::exists(path / "archive.csv")) return {path};
  std::vector<std::filesystem::path> out;
  for (const auto& entry : std::filesystem::directory_iterator(path)) {
    if (entry.is_directory() && entry.path().filename().string().rfind("run_", 0) == 0 &&
        std::filesystem::exists(entry.path() / "archive.csv")) {
      out.push_back(entry.path());
    }
  }
  std::sort(out.begin(), out.end());
  if (out.empty()) throw MissingArchive("no archive.csv under " + path.string());
  return out;
}

// ---- measure ----------------------------------------------------------------------

std::vector<int> sampled_generations(const EliteArchive& archive, int every) {
  std::vector<int> out;
  const int stride = std::max(every, 1);
  for (int g : archive.generations())
    if (g % stride == 0) out.push_back(g);
  if (!archive.empty() && (out.empty() || out.back() != archive.last_generation())) {
    out.push_back(archive.last_generation());
  }
  return out;
}

std::vector<MeasureRow> measure_vs_random(const std::vector<RunArchive>& runs, const MeasureOptions& options) {
  std::vector<MeasureRow> out;
  for (const auto& run : runs) {
    for (int g : sampled_generations(run.archive, options.every)) {
      // Same opponents for the same (run, generation) in every layer: common random numbers.
      Rng rng(splitmix64(run_seed(options.rng_seed, run.run) + static_cast<std::uint64_t>(g)));
      const auto& elite = run.archive.generation(g);
      const std::size_t n = std::min<std::size_t>(elite.size(), static_cast<std::size_t>(options.top));
      for (std::size_t i = 0; i < n; ++i) {
        out.push_back({run.layer, run.run, g, elite[i].rank, "vs-random",
                       fitness_vs_random(elite[i].genome, options.opponents, options.factors, rng)});
      }
    }
  }
  return out;
}

std::vector<MeasureRow> measure_vs_past_winners(const std::vector<RunArchive>& runs, const MeasureOptions& options) {
  std::vector<MeasureRow> out;
  for (const auto& run : runs) {
    for (int g : sampled_generations(run.archive, options.every)) {
      out.push_back({run.layer, run.run, g, -1, "vs-past-winners",
                     unbounded_fitness(run.archive, g, options.top, options.factors)});
    }
  }
  return out;
}

PatternTable measure_vs_patterns(const std::vector<RunArchive>& runs, const std::vector<RlePattern>& patterns,
                                 const MeasureOptions& options) {
  PatternTable t;
  std::map<std::string, std::vector<SeedGenome>> champions;
  for (const auto& run : runs) {
    if (!champions.count(run.layer)) t.layers.push_back(run.layer);
    champions[run.layer].push_back(run.archive.generation(run.archive.last_generation()).front().genome);
  }
  std::vector<std::vector<PatternScore>> by_layer;
  for (const auto& layer : t.layers) {
    by_layer.push_back(pattern_tournament(champions[layer], patterns, options.area_limit, options.games_per_pattern,
                                          options.factors));
  }
  t.average.assign(t.layers.size(), 0.0);
  if (by_layer.empty()) return t;
  for (std::size_t p = 0; p < by_layer.front().size(); ++p) {
    t.patterns.push_back(by_layer.front()[p].name);
    t.areas.push_back(by_layer.front()[p].area);
    std::vector<double> row;
    for (std::size_t l = 0; l < by_layer.size(); ++l) {
      row.push_back(100.0 * by_layer[l][p].evolved_win_rate);
      t.average[l] += row.back();
    }
    t.percent.push_back(std::move(row));
  }
  if (!t.patterns.empty())
    for (double& a : t.average) a /= static_cast<double>(t.patterns.size());
  return t;
}

void write_pattern_table(std::ostream& out, const PatternTable& table) {
  out << "pattern,area";
  for (const auto& l : table.layers) out << ',' << l;
  out << '\n';
  for (std::size_t p = 0; p < table.patterns.size(); ++p) {
    out << table.patterns[p] << ',' << table.areas[p];
    for (double v : table.percent[p]) out << ',' << num(v);
    out << '\n';
  }
  out << "Average,";
  for (double v : table.average) out << ',' << num(v);
  out << '\n';
}

}  // namespace symbiolife
