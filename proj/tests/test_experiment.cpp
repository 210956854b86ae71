#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "symbiolife/errors.hpp"
#include "symbiolife/experiment.hpp"

using namespace symbiolife;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("symbiolife_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

ExperimentConfig small(int layer) {
  ExperimentConfig c;
  c.experiment_type_num = layer;
  c.pop_size = 16;
  c.elite_size = 6;
  c.num_generations = 3;
  c.num_runs = 2;
  c.prob_fusion = 0.2;
  c.prob_fission = 0.05;
  c.rng_seed = 5;
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

}  // namespace

TEST_CASE("run_seed follows the SplitMix64 stream") {
  // Reference outputs of SplitMix64 started at state 0.
  CHECK(run_seed(0, 0) == 0xe220a8397b1dcdafULL);
  CHECK(run_seed(0, 1) == 0x6e789e6aa1b965f4ULL);
  CHECK(run_seed(0, 2) == 0x06c45d188009454fULL);
  CHECK(run_seed(7, 3) != run_seed(8, 3));
}

TEST_CASE("cmd_run writes a complete, reproducible experiment") {
  TempDir tmp;
  const ExperimentConfig c = small(4);
  const RunSummary s = cmd_run(c, tmp.path / "a");
  REQUIRE(s.run_dirs.size() == 2);
  for (const char* f : {"config.cfg", "manifest.json"}) CHECK(fs::exists(tmp.path / "a" / f));
  CHECK(parse_config(slurp(tmp.path / "a" / "config.cfg")).pop_size == 16);

  cmd_run(c, tmp.path / "b");
  for (const char* run : {"run_00", "run_01"})
    for (const char* f : {"archive.csv", "fusion_events.csv", "metrics.csv"})
      CHECK(slurp(tmp.path / "a" / run / f) == slurp(tmp.path / "b" / run / f));
  CHECK(slurp(tmp.path / "a" / "run_00" / "archive.csv") != slurp(tmp.path / "a" / "run_01" / "archive.csv"));

  CHECK_THROWS_AS(cmd_run(c, tmp.path / "a"), IoError);

  const auto dirs = find_run_dirs(tmp.path / "a");
  CHECK(dirs == s.run_dirs);
  CHECK(find_run_dirs(dirs[1]) == std::vector<fs::path>{dirs[1]});
  CHECK_THROWS_AS(find_run_dirs(tmp.path), MissingArchive);

  const RunArchive ra = read_archive_csv(dirs[0] / "archive.csv");
  CHECK(ra.layer == "layer4");
  CHECK(ra.run == 0);
  CHECK(ra.archive.generations() == std::vector<int>{0, 1, 2, 3});
  CHECK(ra.archive.generation(3).size() == 6);
  const auto metrics = read_metrics_csv(dirs[0] / "metrics.csv");
  CHECK(metrics.size() == 4);
}

TEST_CASE("zero generations still writes the initial snapshot") {
  TempDir tmp;
  ExperimentConfig c = small(1);
  c.num_generations = 0;
  c.num_runs = 1;
  cmd_run(c, tmp.path / "z");
  const RunArchive ra = read_archive_csv(tmp.path / "z" / "run_00" / "archive.csv");
  CHECK(ra.archive.generations() == std::vector<int>{0});
}

TEST_CASE("CSV round trips") {
  TempDir tmp;
  cmd_run(small(4), tmp.path / "x");
  const fs::path run = tmp.path / "x" / "run_00";

  const RunArchive ra = read_archive_csv(run / "archive.csv");
  std::ostringstream archive;
  write_archive_csv(archive, ra.archive, ra.layer, ra.run);
  CHECK(archive.str() == slurp(run / "archive.csv"));

  const auto fusion = read_fusion_csv(run / "fusion_events.csv");
  std::vector<FusionEvent> events;
  for (const auto& f : fusion) events.push_back(f.event);
  std::ostringstream fusion_text;
  write_fusion_csv(fusion_text, events, "layer4", 0);
  CHECK(fusion_text.str() == slurp(run / "fusion_events.csv"));

  const auto metrics = read_metrics_csv(run / "metrics.csv");
  std::vector<GenerationMetrics> ms;
  for (const auto& m : metrics) ms.push_back(m.metrics);
  std::ostringstream metrics_text;
  write_metrics_csv(metrics_text, ms, "layer4", 0);
  CHECK(metrics_text.str() == slurp(run / "metrics.csv"));

  const std::vector<MeasureRow> rows{{"layer1", 0, 3, 2, "vs-random", 0.125}, {"layer2", 1, 0, -1, "vs-past-winners", -0.3}};
  std::ostringstream measure_text;
  write_measure_csv(measure_text, rows);
  spit(tmp.path / "m.csv", measure_text.str());
  const auto back = read_measure_csv(tmp.path / "m.csv");
  REQUIRE(back.size() == 2);
  CHECK(back[0].rank == 2);
  CHECK(back[1].rank == -1);
  CHECK(back[1].value == -0.3);
  CHECK(back[1].measure == "vs-past-winners");
}

TEST_CASE("malformed CSV input is rejected") {
  TempDir tmp;
  const fs::path p = tmp.path / "bad.csv";
  spit(p, "layer,run\n");
  CHECK_THROWS_AS(read_metrics_csv(p), MalformedCsv);
  spit(p, std::string(kMeasureHeader) + "\nlayer1,zero,0,,vs-random,0.5\n");
  CHECK_THROWS_AS(read_measure_csv(p), MalformedCsv);
  spit(p, std::string(kMeasureHeader) + "\nlayer1,0,0,,vs-random\n");
  CHECK_THROWS_AS(read_measure_csv(p), MalformedCsv);
  spit(p, std::string(kArchiveHeader) + "\nlayer1,0,0,0,1,2,2,4,0.5,0.5,random,0,11/1\n");
  CHECK_THROWS_AS(read_archive_csv(p), MalformedCsv);
  spit(p, std::string(kArchiveHeader) + "\nlayer1,0,0,0,1,2,2,4,0.5,0.5,alien,0,11/00\n");
  CHECK_THROWS_AS(read_archive_csv(p), MalformedCsv);
  CHECK_THROWS_AS(read_metrics_csv(tmp.path / "missing.csv"), IoError);
  spit(p, std::string(kMetricsHeader) + "\nlayer1,0,0,1,2\n");
  CHECK_THROWS_AS(load_report_inputs({p}), MalformedCsv);
  spit(p, "what,ever\n1,2\n");
  CHECK_THROWS_AS(load_report_inputs({p}), MalformedCsv);
  CHECK_THROWS_AS(load_report_inputs({tmp.path / "nope"}), IoError);
}

TEST_CASE("measures produce one row per elite member and generation") {
  TempDir tmp;
  cmd_run(small(1), tmp.path / "l1");
  std::vector<RunArchive> runs;
  for (const auto& d : find_run_dirs(tmp.path / "l1")) runs.push_back(read_archive_csv(d / "archive.csv"));

  MeasureOptions opt;
  opt.top = 3;
  opt.opponents = 4;
  opt.every = 2;
  CHECK(sampled_generations(runs[0].archive, 2) == std::vector<int>{0, 2, 3});
  const auto rows = measure_vs_random(runs, opt);
  CHECK(rows.size() == 2 * 3 * 3);
  for (const auto& r : rows) {
    CHECK(r.value >= 0.0);
    CHECK(r.value <= 1.0);
  }
  CHECK(measure_vs_random(runs, opt).back().value == rows.back().value);

  const auto past = measure_vs_past_winners(runs, opt);
  CHECK(past.size() == 2 * 3);
  CHECK(past.front().generation == 0);
  CHECK(past.front().value == 0.0);

  const RlePattern block{"block", SeedGenome::from_compact("11/11")};
  const PatternTable t = measure_vs_patterns(runs, {block}, opt);
  CHECK(t.layers == std::vector<std::string>{"layer1"});
  REQUIRE(t.patterns.size() == 1);
  CHECK(t.areas[0] == 4);
  CHECK(t.average[0] == t.percent[0][0]);
  std::ostringstream out;
  write_pattern_table(out, t);
  CHECK(out.str().rfind("pattern,area,layer1\nblock,4,", 0) == 0);
}

TEST_CASE("report on a single layer") {
  TempDir tmp;
  cmd_run(small(4), tmp.path / "l4");
  std::vector<RunArchive> runs;
  for (const auto& d : find_run_dirs(tmp.path / "l4")) runs.push_back(read_archive_csv(d / "archive.csv"));
  MeasureOptions opt;
  opt.opponents = 4;
  std::ostringstream m;
  auto rows = measure_vs_random(runs, opt);
  const auto past = measure_vs_past_winners(runs, opt);
  rows.insert(rows.end(), past.begin(), past.end());
  write_measure_csv(m, rows);
  spit(tmp.path / "l4" / "measures.csv", m.str());

  const ReportInputs in = load_report_inputs({tmp.path / "l4"});
  CHECK(in.metrics.size() == 8);
  CHECK(in.measures.size() == rows.size());
  const auto files = cmd_report(in, tmp.path / "report");
  for (const char* f : {"fitness_vs_random.svg", "area.svg", "density.svg", "diversity.svg", "past_winners.svg",
                        "layer_welch.csv", "correlations.csv", "external_correlation.csv", "fusion_summary.csv",
                        "fusion_welch.csv", "final_summary.csv"}) {
    CHECK_MESSAGE(fs::exists(tmp.path / "report" / f), f);
  }
  CHECK(files.size() == 11);
  const std::string svg = slurp(tmp.path / "report" / "area.svg");
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("layer4") != std::string::npos);
  // One layer: the Welch table has a header and nothing else.
  const std::string welch = slurp(tmp.path / "report" / "layer_welch.csv");
  CHECK(std::count(welch.begin(), welch.end(), '\n') == 1);
}

TEST_CASE("identical layers give a Welch p of one") {
  std::vector<MetricsRow> metrics;
  std::vector<MeasureRow> measures;
  for (const char* layer : {"layer1", "layer2"}) {
    for (int run = 0; run < 3; ++run) {
      for (int g = 0; g <= 2; ++g) {
        MetricsRow m;
        m.layer = layer;
        m.run = run;
        m.metrics.generation = g;
        m.metrics.mean_area = 25 + run + g;
        m.metrics.mean_density = 0.3 + 0.01 * run;
        m.metrics.diversity = 0.1 * (g + 1);
        metrics.push_back(m);
        measures.push_back({layer, run, g, 0, "vs-random", 0.4 + 0.05 * run + 0.01 * g});
      }
    }
  }
  TempDir tmp;
  cmd_report({metrics, {}, measures}, tmp.path);
  std::istringstream welch(slurp(tmp.path / "layer_welch.csv"));
  std::string line;
  std::getline(welch, line);
  int rows = 0;
  while (std::getline(welch, line)) {
    ++rows;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) f.push_back(item);
    REQUIRE(f.size() >= 13);
    CHECK_MESSAGE(f[8] == "0", line);
    CHECK_MESSAGE(f[10] == "1", line);
    CHECK_MESSAGE(f[11] == "0", line);
  }
  // vs-random and relative fitness, each over all generations and the final one.
  CHECK(rows == 4);
  CHECK(!fs::exists(tmp.path / "fusion_summary.csv"));
}

TEST_CASE("render_line_chart handles flat and empty input") {
  const std::string flat = render_line_chart("t", "x", "y", {{"a & b", {0, 1, 2}, {3, 3, 3}}});
  CHECK(flat.find("a &amp; b") != std::string::npos);
  CHECK(flat.find(">nan") == std::string::npos);
  CHECK(flat.find("nan,") == std::string::npos);
  CHECK(flat.find(">3.0<") != std::string::npos);
  const std::string empty = render_line_chart("t", "x", "y", {});
  CHECK(empty.find("</svg>") != std::string::npos);
}
