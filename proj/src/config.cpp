#include "symbiolife/config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <variant>

#include "symbiolife/errors.hpp"

namespace symbiolife {

namespace {

using Field = std::variant<int ExperimentConfig::*, double ExperimentConfig::*, std::uint64_t ExperimentConfig::*,
                           std::string ExperimentConfig::*>;

struct FieldSpec {
  std::string_view name;
  Field member;
};

constexpr std::array kFields = {
    FieldSpec{"experiment_type_num", &ExperimentConfig::experiment_type_num},
    FieldSpec{"pop_size", &ExperimentConfig::pop_size},
    FieldSpec{"num_trials", &ExperimentConfig::num_trials},
    FieldSpec{"num_generations", &ExperimentConfig::num_generations},
    FieldSpec{"min_s_xspan", &ExperimentConfig::min_s_xspan},
    FieldSpec{"min_s_yspan", &ExperimentConfig::min_s_yspan},
    FieldSpec{"s_xspan", &ExperimentConfig::s_xspan},
    FieldSpec{"s_yspan", &ExperimentConfig::s_yspan},
    FieldSpec{"max_area_first", &ExperimentConfig::max_area_first},
    FieldSpec{"max_area_last", &ExperimentConfig::max_area_last},
    FieldSpec{"seed_density", &ExperimentConfig::seed_density},
    FieldSpec{"width_factor", &ExperimentConfig::width_factor},
    FieldSpec{"height_factor", &ExperimentConfig::height_factor},
    FieldSpec{"time_factor", &ExperimentConfig::time_factor},
    FieldSpec{"tournament_size", &ExperimentConfig::tournament_size},
    FieldSpec{"elite_size", &ExperimentConfig::elite_size},
    FieldSpec{"mutation_rate", &ExperimentConfig::mutation_rate},
    FieldSpec{"prob_flip", &ExperimentConfig::prob_flip},
    FieldSpec{"prob_grow", &ExperimentConfig::prob_grow},
    FieldSpec{"prob_shrink", &ExperimentConfig::prob_shrink},
    FieldSpec{"min_similarity", &ExperimentConfig::min_similarity},
    FieldSpec{"max_similarity", &ExperimentConfig::max_similarity},
    FieldSpec{"prob_fission", &ExperimentConfig::prob_fission},
    FieldSpec{"prob_fusion", &ExperimentConfig::prob_fusion},
    FieldSpec{"symbiosis_flag", &ExperimentConfig::symbiosis_flag},
    FieldSpec{"fusion_test_flag", &ExperimentConfig::fusion_test_flag},
    FieldSpec{"rng_seed", &ExperimentConfig::rng_seed},
    FieldSpec{"num_runs", &ExperimentConfig::num_runs},
    FieldSpec{"output_dir", &ExperimentConfig::output_dir},
    FieldSpec{"pattern_dir", &ExperimentConfig::pattern_dir},
    FieldSpec{"random_opponents", &ExperimentConfig::random_opponents},
    FieldSpec{"pattern_area_limit", &ExperimentConfig::pattern_area_limit},
    FieldSpec{"games_per_pattern", &ExperimentConfig::games_per_pattern},
    FieldSpec{"past_winner_top", &ExperimentConfig::past_winner_top},
};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T v{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError(std::string(key), "cannot parse '" + std::string(value) + "'");
  }
  return v;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, ptr);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

void require(bool ok, std::string_view key, std::string_view reason) {
  if (!ok) throw ConfigError(std::string(key), std::string(reason));
}

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

std::string ExperimentConfig::layer_name() const {
  std::string name = "layer" + std::to_string(experiment_type_num);
  if (experiment_type_num == 4) {
    if (fusion_test_flag == 1) name += "-shuffled";
    if (symbiosis_flag == 1) name += "-mutualism";
  }
  return name;
}

void validate(const ExperimentConfig& c) {
  require(c.experiment_type_num >= 1 && c.experiment_type_num <= 4, "experiment_type_num", "must be 1, 2, 3 or 4");
  require(c.pop_size >= 2, "pop_size", "must be at least 2");
  require(c.num_trials >= 1, "num_trials", "must be at least 1");
  require(c.num_generations >= 0, "num_generations", "must be non-negative");
  require(c.min_s_xspan >= 1, "min_s_xspan", "must be at least 1");
  require(c.min_s_yspan >= 1, "min_s_yspan", "must be at least 1");
  require(c.s_xspan >= c.min_s_xspan, "s_xspan", "must be at least min_s_xspan");
  require(c.s_yspan >= c.min_s_yspan, "s_yspan", "must be at least min_s_yspan");
  require(c.max_area_first >= c.s_xspan * c.s_yspan, "max_area_first", "must be at least s_xspan * s_yspan");
  require(c.max_area_last >= c.max_area_first, "max_area_last", "must be at least max_area_first");
  require(is_probability(c.seed_density), "seed_density", "must lie in [0, 1]");
  // Each seed must fit its half of the toroid.
  require(c.width_factor >= 2.0, "width_factor", "must be at least 2");
  require(c.height_factor >= 1.0, "height_factor", "must be at least 1");
  require(c.time_factor > 0.0, "time_factor", "must be positive");
  require(c.tournament_size >= 1 && c.tournament_size <= c.pop_size, "tournament_size", "must lie in [1, pop_size]");
  require(c.elite_size >= 1 && c.elite_size <= c.pop_size, "elite_size", "must lie in [1, pop_size]");
  require(is_probability(c.mutation_rate), "mutation_rate", "must lie in [0, 1]");
  require(is_probability(c.prob_flip), "prob_flip", "must lie in [0, 1]");
  require(is_probability(c.prob_grow), "prob_grow", "must lie in [0, 1]");
  require(is_probability(c.prob_shrink), "prob_shrink", "must lie in [0, 1]");
  require(std::abs(c.prob_flip + c.prob_grow + c.prob_shrink - 1.0) <= 1e-9, "prob_flip",
          "prob_flip + prob_grow + prob_shrink must equal 1");
  require(is_probability(c.min_similarity), "min_similarity", "must lie in [0, 1]");
  require(is_probability(c.max_similarity), "max_similarity", "must lie in [0, 1]");
  require(c.min_similarity <= c.max_similarity, "min_similarity", "must not exceed max_similarity");
  require(is_probability(c.prob_fission), "prob_fission", "must lie in [0, 1]");
  require(is_probability(c.prob_fusion), "prob_fusion", "must lie in [0, 1]");
  require(c.prob_fission + c.prob_fusion <= 1.0 + 1e-12, "prob_fusion", "prob_fission + prob_fusion must not exceed 1");
  require(c.symbiosis_flag == 0 || c.symbiosis_flag == 1, "symbiosis_flag", "must be 0 or 1");
  require(c.fusion_test_flag == 0 || c.fusion_test_flag == 1, "fusion_test_flag", "must be 0 or 1");
  require(c.num_runs >= 1, "num_runs", "must be at least 1");
  require(!c.output_dir.empty(), "output_dir", "must not be empty");
  require(c.random_opponents >= 1, "random_opponents", "must be at least 1");
  require(c.pattern_area_limit >= 1, "pattern_area_limit", "must be at least 1");
  require(c.games_per_pattern >= 1, "games_per_pattern", "must be at least 1");
  require(c.past_winner_top >= 1, "past_winner_top", "must be at least 1");
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig config;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("", "line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    const FieldSpec* spec = nullptr;
    for (const auto& f : kFields) {
      if (f.name == key) spec = &f;
    }
    if (spec == nullptr) throw ConfigError(std::string(key), "unknown key");
    std::visit(
        [&](auto member) {
          using T = std::remove_reference_t<decltype(config.*member)>;
          if constexpr (std::is_same_v<T, std::string>) {
            config.*member = std::string(value);
          } else {
            config.*member = parse_number<T>(key, value);
          }
        },
        spec->member);
  }
  validate(config);
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string to_config_text(const ExperimentConfig& config) {
  std::string out;
  for (const auto& f : kFields) {
    out += f.name;
    out += " = ";
    std::visit(
        [&](auto member) {
          const auto& v = config.*member;
          using T = std::remove_cvref_t<decltype(v)>;
          if constexpr (std::is_same_v<T, std::string>) {
            out += v;
          } else if constexpr (std::is_same_v<T, double>) {
            out += format_double(v);
          } else {
            out += std::to_string(v);
          }
        },
        f.member);
    out += '\n';
  }
  return out;
}

std::uint64_t config_hash(const ExperimentConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : to_config_text(config)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

ExperimentConfig full_scale(const ExperimentConfig& config) {
  ExperimentConfig out;
  out.experiment_type_num = config.experiment_type_num;
  out.symbiosis_flag = config.symbiosis_flag;
  out.fusion_test_flag = config.fusion_test_flag;
  out.rng_seed = config.rng_seed;
  out.output_dir = config.output_dir;
  out.pattern_dir = config.pattern_dir;
  out.num_runs = 12;
  return out;
}

}  // namespace symbiolife
