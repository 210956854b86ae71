#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "symbiolife/genome.hpp"

namespace symbiolife {

enum class CellState : std::uint8_t { Dead = 0, Red = 1, Blue = 2 };

/// Finite toroidal two-color grid. Storage is two packed bitplanes per row
/// (live, red); a cell is Blue when live and not red.
class Arena {
 public:
  Arena() = default;
  Arena(int width, int height);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }

  /// x is the column, y the row. Both must be in range.
  CellState at(int x, int y) const;
  void set(int x, int y, CellState s);

  std::size_t count(CellState s) const;
  std::size_t live_count() const;

  /// Advances one generation of B3/S23 with majority-color births.
  void step();

  bool operator==(const Arena&) const = default;

 private:
  void step_narrow();

  std::size_t word_index(int x, int y) const {
    return static_cast<std::size_t>(y) * words_per_row_ + static_cast<std::size_t>(x) / 64;
  }

  int width_ = 0;
  int height_ = 0;
  std::size_t words_per_row_ = 0;
  std::vector<std::uint64_t> live_;
  std::vector<std::uint64_t> red_;
};

/// Pure successor function.
Arena step(const Arena& arena);

/// Collapses Red and Blue to a single live state (represented as Red).
Arena project_to_life(const Arena& arena);

struct GameFactors {
  double width_factor = 6.0;
  double height_factor = 3.0;
  double time_factor = 6.0;
};

struct GameSpec {
  int width = 0;
  int height = 0;
  int max_steps = 0;

  bool operator==(const GameSpec&) const = default;
};

enum class GameResult { RedWins, BlueWins, Tie };

struct GameOutcome {
  int red_initial = 0;
  int red_final = 0;
  int blue_initial = 0;
  int blue_final = 0;
  int red_score = 0;
  int blue_score = 0;
  GameResult result = GameResult::Tie;
};

/// Toroid and time budget scale with the larger of the two seeds' rows/columns.
/// Products are rounded half up.
GameSpec size_game(const SeedGenome& a, const SeedGenome& b, const GameFactors& factors);

/// Red seed centered in the left half, blue seed centered in the right half.
/// Odd trials swap the halves. Throws SeedTooLarge when a seed does not fit.
Arena place_seeds(const GameSpec& spec, const SeedGenome& red, const SeedGenome& blue, int trial_index);

GameOutcome score_game(const Arena& initial, const Arena& final_state);

/// Plays one Immigration Game; seed_a is always the Red player.
GameOutcome run_game(const SeedGenome& seed_a, const SeedGenome& seed_b, const GameFactors& factors,
                     int trial_index);

/// Win credit of the Red player: 1 for a win, 0.5 for a tie, 0 for a loss.
inline double red_credit(GameResult r) {
  return r == GameResult::RedWins ? 1.0 : r == GameResult::Tie ? 0.5 : 0.0;
}

}  // namespace symbiolife
