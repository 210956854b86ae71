#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "symbiolife/rng.hpp"

namespace symbiolife {

/// Binary seed matrix: the genotype. Bit (r, c) set means the cell is live at t = 0.
class SeedGenome {
 public:
  SeedGenome() = default;
  SeedGenome(int rows, int cols);
  SeedGenome(int rows, int cols, std::vector<std::uint8_t> bits);

  /// Builds a genome from strings of '0'/'1', one per row.
  static SeedGenome from_rows(std::initializer_list<std::string_view> rows);

  /// Seed text format: "rows cols\n" followed by `rows` lines of `cols` 0/1 characters.
  static SeedGenome from_text(std::string_view text);
  std::string to_text() const;

  /// Single-line variant used inside CSV fields: rows joined by '/'.
  static SeedGenome from_compact(std::string_view text);
  std::string to_compact() const;

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  int area() const noexcept { return rows_ * cols_; }
  int live_count() const noexcept;
  double density() const noexcept;

  bool at(int r, int c) const { return bits_[index(r, c)] != 0; }
  void set(int r, int c, bool v) { bits_[index(r, c)] = v ? 1 : 0; }
  void flip(int r, int c) { bits_[index(r, c)] ^= 1; }

  std::span<const std::uint8_t> bits() const noexcept { return bits_; }
  std::span<std::uint8_t> bits() noexcept { return bits_; }

  bool operator==(const SeedGenome&) const = default;

 private:
  std::size_t index(int r, int c) const {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(c);
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::uint8_t> bits_;
};

enum class Side { Top, Bottom, Left, Right };

enum class Axis { Row, Column };

/// Each bit independently live with probability `density`.
SeedGenome random_seed(int rows, int cols, double density, Rng& rng);

/// Exactly `live` ones placed uniformly at random.
SeedGenome random_seed_exact(int rows, int cols, int live, Rng& rng);

/// Flips each bit with probability `mutation_rate`; if nothing flipped, flips one uniform bit.
SeedGenome mutate_flip(const SeedGenome& g, double mutation_rate, Rng& rng);

SeedGenome grow_side(const SeedGenome& g, Side side, double density, Rng& rng);
SeedGenome grow(const SeedGenome& g, double density, Rng& rng);

SeedGenome shrink_side(const SeedGenome& g, Side side);
/// Removes one uniformly chosen outer line among those that keep the minimum dims.
/// Returns `g` unchanged when no removal is legal.
SeedGenome shrink(const SeedGenome& g, int min_rows, int min_cols, Rng& rng);

/// Fraction of matching cells; zero when the dims differ.
double similarity(const SeedGenome& a, const SeedGenome& b);

/// Single cut: child takes lines [0, cut) from `a` and [cut, n) from `b`.
SeedGenome crossover_at(const SeedGenome& a, const SeedGenome& b, Axis axis, int cut);
SeedGenome crossover(const SeedGenome& a, const SeedGenome& b, Rng& rng);

/// Counterclockwise rotation by 90 degrees times `quarter_turns`.
SeedGenome rotate(const SeedGenome& g, int quarter_turns);

/// Places `left` and `right` side by side with one zero column between them.
/// The shorter block is centered vertically; odd slack puts the extra row on top.
SeedGenome join_side_by_side(const SeedGenome& left, const SeedGenome& right);
SeedGenome fuse(const SeedGenome& a, const SeedGenome& b, Rng& rng);

struct SparsestSplit {
  Axis axis;
  int index;
  SeedGenome before;  // lines [0, index)
  SeedGenome after;   // lines (index, n)
};

/// Finds the line with the lowest density, rows top to bottom then columns left to
/// right, first occurrence wins. The line itself belongs to neither part.
SparsestSplit split_at_sparsest(const SeedGenome& g);

/// Keeps one part of the sparsest split, chosen uniformly. nullopt when the kept part
/// is smaller than the minimum dims.
std::optional<SeedGenome> fission(const SeedGenome& g, int min_rows, int min_cols, Rng& rng);

/// Uniform permutation of the cell values.
SeedGenome shuffle(const SeedGenome& g, Rng& rng);

}  // namespace symbiolife
