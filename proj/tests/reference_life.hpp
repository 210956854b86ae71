#pragma once

// Dense, obviously-correct reference steppers used as test oracles.

#include <vector>

#include "symbiolife/life_engine.hpp"

namespace reference {

using symbiolife::Arena;
using symbiolife::CellState;

struct Grid {
  int width = 0;
  int height = 0;
  std::vector<CellState> cells;

  CellState& at(int x, int y) { return cells[static_cast<std::size_t>(y) * width + x]; }
  CellState at(int x, int y) const { return cells[static_cast<std::size_t>(y) * width + x]; }
};

inline Grid from_arena(const Arena& a) {
  Grid g{a.width(), a.height(), std::vector<CellState>(static_cast<std::size_t>(a.width()) * a.height())};
  for (int y = 0; y < a.height(); ++y)
    for (int x = 0; x < a.width(); ++x) g.at(x, y) = a.at(x, y);
  return g;
}

inline Arena to_arena(const Grid& g) {
  Arena a(g.width, g.height);
  for (int y = 0; y < g.height; ++y)
    for (int x = 0; x < g.width; ++x) a.set(x, y, g.at(x, y));
  return a;
}

inline Grid immigration_step(const Grid& g) {
  Grid out = g;
  for (int y = 0; y < g.height; ++y) {
    for (int x = 0; x < g.width; ++x) {
      int live = 0, red = 0;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0) continue;
          const CellState s = g.at((x + dx + g.width) % g.width, (y + dy + g.height) % g.height);
          live += s != CellState::Dead;
          red += s == CellState::Red;
        }
      }
      const CellState self = g.at(x, y);
      if (self == CellState::Dead) {
        out.at(x, y) = live == 3 ? (red >= 2 ? CellState::Red : CellState::Blue) : CellState::Dead;
      } else {
        out.at(x, y) = (live == 2 || live == 3) ? self : CellState::Dead;
      }
    }
  }
  return out;
}

/// Plain single-state B3/S23 on a boolean torus.
inline std::vector<bool> life_step(const std::vector<bool>& cells, int width, int height) {
  std::vector<bool> out(cells.size());
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      int n = 0;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx)
          if (dx != 0 || dy != 0)
            n += cells[static_cast<std::size_t>((y + dy + height) % height) * width + (x + dx + width) % width];
      const bool alive = cells[static_cast<std::size_t>(y) * width + x];
      out[static_cast<std::size_t>(y) * width + x] = n == 3 || (alive && n == 2);
    }
  }
  return out;
}

inline std::vector<bool> live_mask(const Arena& a) {
  std::vector<bool> out(static_cast<std::size_t>(a.width()) * a.height());
  for (int y = 0; y < a.height(); ++y)
    for (int x = 0; x < a.width(); ++x) out[static_cast<std::size_t>(y) * a.width() + x] = a.at(x, y) != CellState::Dead;
  return out;
}

inline Arena random_soup(int width, int height, double density, symbiolife::Rng& rng) {
  Arena a(width, height);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      if (rng.bernoulli(density)) a.set(x, y, rng.below(2) ? CellState::Red : CellState::Blue);
  return a;
}

inline Arena translate(const Arena& a, int dx, int dy) {
  Arena out(a.width(), a.height());
  for (int y = 0; y < a.height(); ++y)
    for (int x = 0; x < a.width(); ++x)
      out.set(((x + dx) % a.width() + a.width()) % a.width(), ((y + dy) % a.height() + a.height()) % a.height(),
              a.at(x, y));
  return out;
}

}  // namespace reference
