#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "symbiolife/config.hpp"
#include "symbiolife/errors.hpp"
#include "symbiolife/experiment.hpp"
#include "symbiolife/fitness_measures.hpp"
#include "symbiolife/stats.hpp"

namespace py = pybind11;
using namespace symbiolife;

namespace {

const char* result_name(GameResult r) {
  switch (r) {
    case GameResult::RedWins: return "red";
    case GameResult::BlueWins: return "blue";
    case GameResult::Tie: return "tie";
  }
  return "tie";
}

py::dict test_dict(const TestResult& t) {
  py::dict d;
  d["statistic"] = t.statistic;
  d["df"] = t.degrees_of_freedom;
  d["p_value"] = t.p_value;
  d["significant"] = t.significant;
  d["degenerate"] = t.degenerate;
  return d;
}

std::vector<RunArchive> load_runs(const std::vector<std::filesystem::path>& inputs) {
  std::vector<RunArchive> runs;
  for (const auto& p : inputs)
    for (const auto& dir : find_run_dirs(p)) runs.push_back(read_archive_csv(dir / "archive.csv"));
  return runs;
}

py::list measure_rows(const std::vector<MeasureRow>& rows) {
  py::list out;
  for (const auto& r : rows) {
    py::dict d;
    d["layer"] = r.layer;
    d["run"] = r.run;
    d["generation"] = r.generation;
    d["rank"] = r.rank < 0 ? py::object(py::none()) : py::object(py::int_(r.rank));
    d["measure"] = r.measure;
    d["value"] = r.value;
    out.append(std::move(d));
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Immigration Game seed evolution";
  m.attr("__version__") = kVersion;

  // Later registrations are tried first, so subclasses go after the base.
  static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
  static py::exception<ConfigError> config_error(m, "ConfigError", error.ptr());
  static py::exception<MalformedCsv> malformed_csv(m, "MalformedCsv", error.ptr());
  static py::exception<MalformedRle> malformed_rle(m, "MalformedRle", error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ConfigError& e) {
      config_error(e.what());
    } catch (const MalformedCsv& e) {
      malformed_csv(e.what());
    } catch (const MalformedRle& e) {
      malformed_rle(e.what());
    } catch (const Error& e) {
      error(e.what());
    }
  });

  py::class_<SeedGenome>(m, "SeedGenome")
      .def(py::init<int, int>(), py::arg("rows"), py::arg("cols"))
      .def_static("from_compact", &SeedGenome::from_compact, "Rows of 0/1 joined by '/'")
      .def_static("random", [](int rows, int cols, double density, std::uint64_t seed) {
        Rng rng(seed);
        return random_seed(rows, cols, density, rng);
      }, py::arg("rows"), py::arg("cols"), py::arg("density") = 0.375, py::arg("seed") = 1)
      .def("to_compact", &SeedGenome::to_compact)
      .def_property_readonly("rows", &SeedGenome::rows)
      .def_property_readonly("cols", &SeedGenome::cols)
      .def_property_readonly("area", &SeedGenome::area)
      .def_property_readonly("live_count", &SeedGenome::live_count)
      .def_property_readonly("density", &SeedGenome::density)
      .def("at", &SeedGenome::at, py::arg("row"), py::arg("col"))
      .def("set", &SeedGenome::set, py::arg("row"), py::arg("col"), py::arg("live"))
      .def(py::self == py::self)
      .def("__repr__", [](const SeedGenome& g) { return "SeedGenome('" + g.to_compact() + "')"; });

  py::class_<GameFactors>(m, "GameFactors")
      .def(py::init<>())
      .def(py::init([](double w, double h, double t) { return GameFactors{w, h, t}; }), py::arg("width_factor"),
           py::arg("height_factor"), py::arg("time_factor"))
      .def_readwrite("width_factor", &GameFactors::width_factor)
      .def_readwrite("height_factor", &GameFactors::height_factor)
      .def_readwrite("time_factor", &GameFactors::time_factor);

  py::class_<GameOutcome>(m, "GameOutcome")
      .def_readonly("red_initial", &GameOutcome::red_initial)
      .def_readonly("red_final", &GameOutcome::red_final)
      .def_readonly("blue_initial", &GameOutcome::blue_initial)
      .def_readonly("blue_final", &GameOutcome::blue_final)
      .def_readonly("red_score", &GameOutcome::red_score)
      .def_readonly("blue_score", &GameOutcome::blue_score)
      .def_property_readonly("result", [](const GameOutcome& o) { return result_name(o.result); });

  m.def("run_game", &run_game, py::arg("red"), py::arg("blue"), py::arg("factors") = GameFactors{},
        py::arg("trial") = 0, "One Immigration Game; odd trials swap the starting halves");

  py::class_<ExperimentConfig> cfg(m, "ExperimentConfig");
  cfg.def(py::init<>())
      .def_readwrite("experiment_type_num", &ExperimentConfig::experiment_type_num)
      .def_readwrite("pop_size", &ExperimentConfig::pop_size)
      .def_readwrite("num_trials", &ExperimentConfig::num_trials)
      .def_readwrite("num_generations", &ExperimentConfig::num_generations)
      .def_readwrite("min_s_xspan", &ExperimentConfig::min_s_xspan)
      .def_readwrite("min_s_yspan", &ExperimentConfig::min_s_yspan)
      .def_readwrite("s_xspan", &ExperimentConfig::s_xspan)
      .def_readwrite("s_yspan", &ExperimentConfig::s_yspan)
      .def_readwrite("max_area_first", &ExperimentConfig::max_area_first)
      .def_readwrite("max_area_last", &ExperimentConfig::max_area_last)
      .def_readwrite("seed_density", &ExperimentConfig::seed_density)
      .def_readwrite("width_factor", &ExperimentConfig::width_factor)
      .def_readwrite("height_factor", &ExperimentConfig::height_factor)
      .def_readwrite("time_factor", &ExperimentConfig::time_factor)
      .def_readwrite("tournament_size", &ExperimentConfig::tournament_size)
      .def_readwrite("elite_size", &ExperimentConfig::elite_size)
      .def_readwrite("mutation_rate", &ExperimentConfig::mutation_rate)
      .def_readwrite("prob_flip", &ExperimentConfig::prob_flip)
      .def_readwrite("prob_grow", &ExperimentConfig::prob_grow)
      .def_readwrite("prob_shrink", &ExperimentConfig::prob_shrink)
      .def_readwrite("min_similarity", &ExperimentConfig::min_similarity)
      .def_readwrite("max_similarity", &ExperimentConfig::max_similarity)
      .def_readwrite("prob_fission", &ExperimentConfig::prob_fission)
      .def_readwrite("prob_fusion", &ExperimentConfig::prob_fusion)
      .def_readwrite("symbiosis_flag", &ExperimentConfig::symbiosis_flag)
      .def_readwrite("fusion_test_flag", &ExperimentConfig::fusion_test_flag)
      .def_readwrite("rng_seed", &ExperimentConfig::rng_seed)
      .def_readwrite("num_runs", &ExperimentConfig::num_runs)
      .def_readwrite("output_dir", &ExperimentConfig::output_dir)
      .def_readwrite("pattern_dir", &ExperimentConfig::pattern_dir)
      .def_property_readonly("layer_name", &ExperimentConfig::layer_name)
      .def("factors", &ExperimentConfig::factors)
      .def("validate", [](const ExperimentConfig& c) { validate(c); })
      .def("to_text", [](const ExperimentConfig& c) { return to_config_text(c); });

  m.def("parse_config", &parse_config, py::arg("text"));
  m.def("load_config", &load_config, py::arg("path"));

  m.def("cmd_run", [](const ExperimentConfig& c, const std::filesystem::path& out) {
    py::gil_scoped_release release;
    return cmd_run(c, out).run_dirs;
  }, py::arg("config"), py::arg("out_dir"), "Runs the experiment into a new directory; returns the run directories");

  m.def("measure_vs_random", [](const std::vector<std::filesystem::path>& inputs, int top, int opponents, int every,
                                std::uint64_t seed) {
    MeasureOptions opt;
    opt.top = top;
    opt.opponents = opponents;
    opt.every = every;
    opt.rng_seed = seed;
    return measure_rows(measure_vs_random(load_runs(inputs), opt));
  }, py::arg("inputs"), py::arg("top") = 10, py::arg("opponents") = 50, py::arg("every") = 1, py::arg("seed") = 1);

  m.def("measure_vs_past_winners", [](const std::vector<std::filesystem::path>& inputs, int top, int every) {
    MeasureOptions opt;
    opt.top = top;
    opt.every = every;
    return measure_rows(measure_vs_past_winners(load_runs(inputs), opt));
  }, py::arg("inputs"), py::arg("top") = 10, py::arg("every") = 1);

  m.def("cmd_report", [](const std::vector<std::filesystem::path>& inputs, const std::filesystem::path& out) {
    return cmd_report(load_report_inputs(inputs), out);
  }, py::arg("inputs"), py::arg("out_dir"));

  m.def("fitness_vs_random", [](const SeedGenome& g, int opponents, const GameFactors& f, std::uint64_t seed) {
    Rng rng(seed);
    return fitness_vs_random(g, opponents, f, rng);
  }, py::arg("genome"), py::arg("opponents") = 50, py::arg("factors") = GameFactors{}, py::arg("seed") = 1);

  m.def("parse_rle", [](const std::string& text) { return parse_rle(text).bits; }, py::arg("text"));
  m.def("emit_rle", [](const SeedGenome& g) { return emit_rle(RlePattern{"", g}); }, py::arg("genome"));

  m.def("welch_t_test", [](const std::vector<double>& a, const std::vector<double>& b) {
    return test_dict(welch_t_test(a, b));
  }, py::arg("a"), py::arg("b"));
  m.def("pearson_significance", [](const std::vector<double>& x, const std::vector<double>& y) {
    const Correlation c = pearson_significance(x, y);
    py::dict d = test_dict(c.test);
    d["r"] = c.r;
    return d;
  }, py::arg("x"), py::arg("y"));
}
