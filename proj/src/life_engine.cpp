#include "symbiolife/life_engine.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "symbiolife/errors.hpp"

namespace symbiolife {

namespace {

using Word = std::uint64_t;

struct Scratch {
  std::vector<Word> west_live, east_live, west_red, east_red, next_live, next_red;
};

// Per-row toroidal shifts. west[x] holds row[x - 1], east[x] holds row[x + 1].
void shift_rows(const std::vector<Word>& plane, int width, int height, std::size_t wpr,
                std::vector<Word>& west, std::vector<Word>& east) {
  west.resize(plane.size());
  east.resize(plane.size());
  const std::size_t last = wpr - 1;
  const int top_bit = (width - 1) % 64;
  const Word last_mask = top_bit == 63 ? ~Word{0} : (Word{1} << (top_bit + 1)) - 1;
  for (int y = 0; y < height; ++y) {
    const Word* row = plane.data() + static_cast<std::size_t>(y) * wpr;
    Word* w = west.data() + static_cast<std::size_t>(y) * wpr;
    Word* e = east.data() + static_cast<std::size_t>(y) * wpr;
    const Word first_cell = row[0] & 1;
    const Word last_cell = (row[last] >> top_bit) & 1;
    for (std::size_t k = 0; k < wpr; ++k) {
      const Word carry_in = k == 0 ? last_cell : row[k - 1] >> 63;
      w[k] = (row[k] << 1) | carry_in;
      e[k] = (row[k] >> 1) | (k < last ? row[k + 1] << 63 : 0);
    }
    w[last] &= last_mask;
    e[last] |= first_cell << top_bit;
  }
}

struct Count {
  Word bit0, bit1, high;  // high: count >= 4
};

inline void full_add(Word a, Word b, Word c, Word& sum, Word& carry) {
  const Word t = a ^ b;
  sum = t ^ c;
  carry = (a & b) | (t & c);
}

// Bit-sliced population count of eight neighbor planes.
inline Count count8(Word a, Word b, Word c, Word d, Word e, Word f, Word g, Word h) {
  Word s_abc, c_abc, s_def, c_def, s0, c_ones;
  full_add(a, b, c, s_abc, c_abc);
  full_add(d, e, f, s_def, c_def);
  const Word s_gh = g ^ h;
  const Word c_gh = g & h;
  full_add(s_abc, s_def, s_gh, s0, c_ones);
  Word t, c2a;
  full_add(c_abc, c_def, c_gh, t, c2a);
  const Word s1 = t ^ c_ones;
  const Word c2b = t & c_ones;
  return {s0, s1, c2a | c2b};
}

}  // namespace

Arena::Arena(int width, int height) : width_(width), height_(height) {
  if (width < 1 || height < 1) throw DimensionMismatch("arena dimensions must be positive");
  words_per_row_ = (static_cast<std::size_t>(width) + 63) / 64;
  live_.assign(words_per_row_ * static_cast<std::size_t>(height), 0);
  red_.assign(live_.size(), 0);
}

CellState Arena::at(int x, int y) const {
  const auto i = word_index(x, y);
  const Word m = Word{1} << (x % 64);
  if (!(live_[i] & m)) return CellState::Dead;
  return (red_[i] & m) ? CellState::Red : CellState::Blue;
}

void Arena::set(int x, int y, CellState s) {
  const auto i = word_index(x, y);
  const Word m = Word{1} << (x % 64);
  live_[i] = s == CellState::Dead ? live_[i] & ~m : live_[i] | m;
  red_[i] = s == CellState::Red ? red_[i] | m : red_[i] & ~m;
}

std::size_t Arena::live_count() const {
  std::size_t n = 0;
  for (Word w : live_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::size_t Arena::count(CellState s) const {
  std::size_t n = 0;
  switch (s) {
    case CellState::Red:
      for (Word w : red_) n += static_cast<std::size_t>(std::popcount(w));
      return n;
    case CellState::Blue:
      for (std::size_t i = 0; i < live_.size(); ++i)
        n += static_cast<std::size_t>(std::popcount(live_[i] & ~red_[i]));
      return n;
    case CellState::Dead:
      return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_) - live_count();
  }
  return n;
}

void Arena::step() {
  if (words_per_row_ == 1) {
    step_narrow();
    return;
  }
  thread_local Scratch s;
  shift_rows(live_, width_, height_, words_per_row_, s.west_live, s.east_live);
  shift_rows(red_, width_, height_, words_per_row_, s.west_red, s.east_red);
  s.next_live.resize(live_.size());
  s.next_red.resize(red_.size());

  const std::size_t wpr = words_per_row_;
  for (int y = 0; y < height_; ++y) {
    const std::size_t up = static_cast<std::size_t>((y + height_ - 1) % height_) * wpr;
    const std::size_t mid = static_cast<std::size_t>(y) * wpr;
    const std::size_t down = static_cast<std::size_t>((y + 1) % height_) * wpr;
    for (std::size_t k = 0; k < wpr; ++k) {
      const Count n = count8(s.west_live[up + k], live_[up + k], s.east_live[up + k],
                             s.west_live[mid + k], s.east_live[mid + k],
                             s.west_live[down + k], live_[down + k], s.east_live[down + k]);
      const Count r = count8(s.west_red[up + k], red_[up + k], s.east_red[up + k],
                             s.west_red[mid + k], s.east_red[mid + k],
                             s.west_red[down + k], red_[down + k], s.east_red[down + k]);
      const Word live = live_[mid + k];
      const Word next = n.bit1 & ~n.high & (n.bit0 | live);
      const Word born = next & ~live;
      // A birth has exactly three live parents, so two red parents is a red majority.
      const Word red_majority = r.bit1 | r.high;
      s.next_live[mid + k] = next;
      s.next_red[mid + k] = (next & live & red_[mid + k]) | (born & red_majority);
    }
  }
  live_.swap(s.next_live);
  red_.swap(s.next_red);
}

// Rows fit one word: rotate within the row width and keep the three row windows in registers.
void Arena::step_narrow() {
  thread_local std::vector<Word> next_live, next_red;
  next_live.resize(live_.size());
  next_red.resize(red_.size());
  const int w = width_;
  const Word mask = w == 64 ? ~Word{0} : (Word{1} << w) - 1;
  const auto west = [w, mask](Word row) { return ((row << 1) | (row >> (w - 1))) & mask; };
  const auto east = [w](Word row) { return (row >> 1) | ((row & 1) << (w - 1)); };

  struct Row {
    Word c, w, e;
  };
  const auto load = [&](Word row) { return Row{row, west(row), east(row)}; };

  const int h = height_;
  Row lu = load(live_[h - 1]), lm = load(live_[0]);
  Row ru = load(red_[h - 1]), rm = load(red_[0]);
  for (int y = 0; y < h; ++y) {
    const int yd = y + 1 == h ? 0 : y + 1;
    const Row ld = load(live_[yd]), rd = load(red_[yd]);
    const Count n = count8(lu.w, lu.c, lu.e, lm.w, lm.e, ld.w, ld.c, ld.e);
    const Count r = count8(ru.w, ru.c, ru.e, rm.w, rm.e, rd.w, rd.c, rd.e);
    const Word next = n.bit1 & ~n.high & (n.bit0 | lm.c);
    const Word born = next & ~lm.c;
    next_live[y] = next;
    next_red[y] = (next & lm.c & rm.c) | (born & (r.bit1 | r.high));
    lu = lm;
    lm = ld;
    ru = rm;
    rm = rd;
  }
  live_.swap(next_live);
  red_.swap(next_red);
}

Arena step(const Arena& arena) {
  Arena next = arena;
  next.step();
  return next;
}

Arena project_to_life(const Arena& arena) {
  Arena out(arena.width(), arena.height());
  for (int y = 0; y < arena.height(); ++y)
    for (int x = 0; x < arena.width(); ++x)
      if (arena.at(x, y) != CellState::Dead) out.set(x, y, CellState::Red);
  return out;
}

namespace {

int round_half_up(double v) { return static_cast<int>(std::floor(v + 0.5)); }

}  // namespace

GameSpec size_game(const SeedGenome& a, const SeedGenome& b, const GameFactors& factors) {
  const int max_size = std::max({a.rows(), a.cols(), b.rows(), b.cols(), 1});
  GameSpec spec;
  spec.width = std::max(1, round_half_up(max_size * factors.width_factor));
  spec.height = std::max(1, round_half_up(max_size * factors.height_factor));
  spec.max_steps = std::max(1, round_half_up((spec.width + spec.height) * factors.time_factor));
  return spec;
}

Arena place_seeds(const GameSpec& spec, const SeedGenome& red, const SeedGenome& blue, int trial_index) {
  Arena arena(spec.width, spec.height);
  const int left_width = spec.width / 2;
  const int right_width = spec.width - left_width;
  const bool swapped = trial_index % 2 != 0;

  auto put = [&](const SeedGenome& seed, int x0, int half_width, CellState color) {
    if (seed.cols() > half_width || seed.rows() > spec.height) {
      throw SeedTooLarge("seed " + std::to_string(seed.rows()) + "x" + std::to_string(seed.cols()) +
                         " does not fit a half arena of " + std::to_string(spec.height) + "x" +
                         std::to_string(half_width));
    }
    const int left = x0 + (half_width - seed.cols()) / 2;
    const int top = (spec.height - seed.rows()) / 2;
    for (int r = 0; r < seed.rows(); ++r)
      for (int c = 0; c < seed.cols(); ++c)
        if (seed.at(r, c)) arena.set(left + c, top + r, color);
  };

  if (!swapped) {
    put(red, 0, left_width, CellState::Red);
    put(blue, left_width, right_width, CellState::Blue);
  } else {
    put(blue, 0, left_width, CellState::Blue);
    put(red, left_width, right_width, CellState::Red);
  }
  return arena;
}

GameOutcome score_game(const Arena& initial, const Arena& final_state) {
  GameOutcome o;
  o.red_initial = static_cast<int>(initial.count(CellState::Red));
  o.blue_initial = static_cast<int>(initial.count(CellState::Blue));
  o.red_final = static_cast<int>(final_state.count(CellState::Red));
  o.blue_final = static_cast<int>(final_state.count(CellState::Blue));
  o.red_score = std::max(0, o.red_final - o.red_initial);
  o.blue_score = std::max(0, o.blue_final - o.blue_initial);
  o.result = o.red_score > o.blue_score   ? GameResult::RedWins
             : o.blue_score > o.red_score ? GameResult::BlueWins
                                          : GameResult::Tie;
  return o;
}

GameOutcome run_game(const SeedGenome& seed_a, const SeedGenome& seed_b, const GameFactors& factors,
                     int trial_index) {
  const GameSpec spec = size_game(seed_a, seed_b, factors);
  const Arena initial = place_seeds(spec, seed_a, seed_b, trial_index);
  // Once the state repeats with period 1 or 2 the rest of the game is known, so stop early.
  Arena older = initial;
  Arena prev = initial;
  Arena arena = initial;
  for (int t = 1; t <= spec.max_steps; ++t) {
    std::swap(older, prev);
    prev = arena;
    arena.step();
    if (arena == prev) break;
    if (t >= 2 && arena == older) {
      if ((spec.max_steps - t) % 2 != 0) arena = prev;
      break;
    }
  }
  return score_game(initial, arena);
}

}  // namespace symbiolife
