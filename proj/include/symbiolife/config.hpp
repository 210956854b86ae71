#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "symbiolife/life_engine.hpp"

namespace symbiolife {

/// Every model parameter under its published name, defaults set to the published values,
/// plus run-control fields.
struct ExperimentConfig {
  int experiment_type_num = 4;
  int pop_size = 200;
  int num_trials = 2;
  int num_generations = 100;
  int min_s_xspan = 5;
  int min_s_yspan = 5;
  int s_xspan = 5;
  int s_yspan = 5;
  int max_area_first = 120;
  int max_area_last = 170;
  double seed_density = 0.375;
  double width_factor = 6.0;
  double height_factor = 3.0;
  double time_factor = 6.0;
  int tournament_size = 2;
  int elite_size = 50;
  double mutation_rate = 0.01;
  double prob_flip = 0.6;
  double prob_grow = 0.2;
  double prob_shrink = 0.2;
  double min_similarity = 0.8;
  double max_similarity = 0.99;
  double prob_fission = 0.01;
  double prob_fusion = 0.005;
  int symbiosis_flag = 0;
  int fusion_test_flag = 0;

  // Run control.
  std::uint64_t rng_seed = 1;
  int num_runs = 1;
  std::string output_dir = "runs";
  std::string pattern_dir;

  // External measures.
  int random_opponents = 50;
  int pattern_area_limit = 10000;
  int games_per_pattern = 20;
  int past_winner_top = 10;

  GameFactors factors() const { return {width_factor, height_factor, time_factor}; }

  /// "layer1" .. "layer4", with "-shuffled" / "-mutualism" suffixes for the Layer 4 flags.
  std::string layer_name() const;
};

/// Throws ConfigError naming the first offending key.
void validate(const ExperimentConfig& config);

/// Parses `key = value` lines. '#' starts a comment. Unknown keys are rejected;
/// missing keys keep their defaults. The result is validated.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical text: every key in declaration order, one per line.
std::string to_config_text(const ExperimentConfig& config);

/// Stable 64-bit FNV-1a digest of the canonical text.
std::uint64_t config_hash(const ExperimentConfig& config);

/// The published full-scale protocol: published defaults, 12 runs, keeping the
/// layer selection, flags, seed and paths of `config`.
ExperimentConfig full_scale(const ExperimentConfig& config);

}  // namespace symbiolife
