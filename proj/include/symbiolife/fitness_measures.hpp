#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "symbiolife/archive.hpp"
#include "symbiolife/genome.hpp"
#include "symbiolife/life_engine.hpp"
#include "symbiolife/rng.hpp"

namespace symbiolife {

struct RlePattern {
  std::string name;
  SeedGenome bits;  // height rows x width cols

  int width() const { return bits.cols(); }
  int height() const { return bits.rows(); }
  int area() const { return bits.area(); }
};

/// Life RLE subset: '#' lines, header `x = W, y = H[, rule = B3/S23]`, body of
/// `<count>b|o|$` tokens ended by '!'.
RlePattern parse_rle(std::string_view text, std::string name = {});
RlePattern load_rle(const std::filesystem::path& path);

/// Canonical RLE: no comments, header with rule, trailing dead cells and rows dropped,
/// lines wrapped at 70 characters.
std::string emit_rle(const RlePattern& pattern);

/// Every *.rle file in `dir`, sorted by file name; the name is the file stem.
std::vector<RlePattern> load_pattern_dir(const std::filesystem::path& dir);

/// Share of games won against `opponents` random seeds with the same dims and
/// exactly the same live count. Opponent k is fought with trial index k, so the
/// halves alternate. Ties count 0.5.
double fitness_vs_random(const SeedGenome& genome, int opponents, const GameFactors& factors, Rng& rng);

struct PatternScore {
  std::string name;
  int area = 0;
  int games = 0;
  double evolved_win_rate = 0.0;  // wins + 0.5 ties by the evolved side, over games
};

/// Each pattern within `area_limit` plays `games_per_pairing` games against every
/// champion (champion Red, trial index = game number). Patterns over the limit are skipped.
std::vector<PatternScore> pattern_tournament(const std::vector<SeedGenome>& champions,
                                             const std::vector<RlePattern>& patterns, int area_limit,
                                             int games_per_pairing, const GameFactors& factors);

/// Probability that the top seeds of `later` beat the top seeds of `earlier`:
/// every pair plays twice with the halves swapped, later side Red.
double estimate_p(const std::vector<EliteRecord>& earlier, const std::vector<EliteRecord>& later, int top,
                  const GameFactors& factors);

/// f_n = sum over i < n of (2 p_in - 1). Zero for n = 0.
double unbounded_fitness(const EliteArchive& archive, int n, int top, const GameFactors& factors);

}  // namespace symbiolife
