#include "symbiolife/genome.hpp"

#include <algorithm>
#include <charconv>
#include <utility>

#include "symbiolife/errors.hpp"

namespace symbiolife {

SeedGenome::SeedGenome(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) throw DimensionMismatch("negative seed dimensions");
  bits_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0);
}

SeedGenome::SeedGenome(int rows, int cols, std::vector<std::uint8_t> bits) : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) throw DimensionMismatch("negative seed dimensions");
  if (bits.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
    throw DimensionMismatch("bit count does not match seed dimensions");
  }
  for (auto& b : bits) b = b ? 1 : 0;
  bits_ = std::move(bits);
}

SeedGenome SeedGenome::from_rows(std::initializer_list<std::string_view> rows) {
  const int n = static_cast<int>(rows.size());
  const int m = n == 0 ? 0 : static_cast<int>(rows.begin()->size());
  SeedGenome g(n, m);
  int r = 0;
  for (auto line : rows) {
    if (static_cast<int>(line.size()) != m) throw MalformedSeed("ragged seed rows");
    for (int c = 0; c < m; ++c) {
      if (line[c] != '0' && line[c] != '1') throw MalformedSeed("seed cells must be 0 or 1");
      g.set(r, c, line[c] == '1');
    }
    ++r;
  }
  return g;
}

namespace {

int parse_dim(std::string_view token) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size() || v < 1) {
    throw MalformedSeed("bad seed dimension '" + std::string(token) + "'");
  }
  return v;
}

SeedGenome parse_body(int rows, int cols, std::string_view body, char separator) {
  SeedGenome g(rows, cols);
  std::size_t pos = 0;
  for (int r = 0; r < rows; ++r) {
    if (pos + cols > body.size()) throw MalformedSeed("seed body too short");
    for (int c = 0; c < cols; ++c) {
      const char ch = body[pos + c];
      if (ch != '0' && ch != '1') throw MalformedSeed("seed cells must be 0 or 1");
      g.set(r, c, ch == '1');
    }
    pos += cols;
    const bool last = r + 1 == rows;
    if (pos < body.size() && body[pos] == separator) {
      ++pos;
    } else if (!last) {
      throw MalformedSeed("seed row has wrong length");
    }
  }
  if (pos != body.size()) throw MalformedSeed("trailing data after seed body");
  return g;
}

}  // namespace

SeedGenome SeedGenome::from_text(std::string_view text) {
  const auto eol = text.find('\n');
  if (eol == std::string_view::npos) throw MalformedSeed("missing seed header line");
  const auto header = text.substr(0, eol);
  const auto space = header.find(' ');
  if (space == std::string_view::npos) throw MalformedSeed("seed header must be 'rows cols'");
  const int rows = parse_dim(header.substr(0, space));
  const int cols = parse_dim(header.substr(space + 1));
  return parse_body(rows, cols, text.substr(eol + 1), '\n');
}

std::string SeedGenome::to_text() const {
  std::string out = std::to_string(rows_) + ' ' + std::to_string(cols_) + '\n';
  out.reserve(out.size() + static_cast<std::size_t>(rows_) * (cols_ + 1));
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) out += at(r, c) ? '1' : '0';
    out += '\n';
  }
  return out;
}

SeedGenome SeedGenome::from_compact(std::string_view text) {
  const auto first = text.find('/');
  const int cols = static_cast<int>(first == std::string_view::npos ? text.size() : first);
  if (cols == 0) throw MalformedSeed("empty compact seed");
  const int rows = static_cast<int>((text.size() + 1) / (cols + 1));
  return parse_body(rows, cols, text, '/');
}

std::string SeedGenome::to_compact() const {
  std::string out;
  out.reserve(static_cast<std::size_t>(rows_) * (cols_ + 1));
  for (int r = 0; r < rows_; ++r) {
    if (r > 0) out += '/';
    for (int c = 0; c < cols_; ++c) out += at(r, c) ? '1' : '0';
  }
  return out;
}

int SeedGenome::live_count() const noexcept {
  return static_cast<int>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

double SeedGenome::density() const noexcept {
  return area() == 0 ? 0.0 : static_cast<double>(live_count()) / area();
}

SeedGenome random_seed(int rows, int cols, double density, Rng& rng) {
  SeedGenome g(rows, cols);
  for (auto& b : g.bits()) b = rng.bernoulli(density) ? 1 : 0;
  return g;
}

SeedGenome random_seed_exact(int rows, int cols, int live, Rng& rng) {
  SeedGenome g(rows, cols);
  auto bits = g.bits();
  if (live < 0 || live > g.area()) throw DimensionMismatch("live count outside seed area");
  std::fill_n(bits.begin(), live, std::uint8_t{1});
  return shuffle(g, rng);
}

SeedGenome mutate_flip(const SeedGenome& g, double mutation_rate, Rng& rng) {
  SeedGenome out = g;
  bool flipped = false;
  for (auto& b : out.bits()) {
    if (rng.bernoulli(mutation_rate)) {
      b ^= 1;
      flipped = true;
    }
  }
  if (!flipped && out.area() > 0) {
    out.bits()[rng.below(static_cast<std::uint64_t>(out.area()))] ^= 1;
  }
  return out;
}

SeedGenome grow_side(const SeedGenome& g, Side side, double density, Rng& rng) {
  const bool adds_row = side == Side::Top || side == Side::Bottom;
  const int rows = g.rows() + (adds_row ? 1 : 0);
  const int cols = g.cols() + (adds_row ? 0 : 1);
  const int dr = side == Side::Top ? 1 : 0;
  const int dc = side == Side::Left ? 1 : 0;
  SeedGenome out(rows, cols);
  for (int r = 0; r < g.rows(); ++r)
    for (int c = 0; c < g.cols(); ++c) out.set(r + dr, c + dc, g.at(r, c));
  const int line_len = adds_row ? cols : rows;
  for (int i = 0; i < line_len; ++i) {
    const bool v = rng.bernoulli(density);
    switch (side) {
      case Side::Top: out.set(0, i, v); break;
      case Side::Bottom: out.set(rows - 1, i, v); break;
      case Side::Left: out.set(i, 0, v); break;
      case Side::Right: out.set(i, cols - 1, v); break;
    }
  }
  return out;
}

SeedGenome grow(const SeedGenome& g, double density, Rng& rng) {
  return grow_side(g, static_cast<Side>(rng.below(4)), density, rng);
}

SeedGenome shrink_side(const SeedGenome& g, Side side) {
  const bool drops_row = side == Side::Top || side == Side::Bottom;
  if ((drops_row && g.rows() == 0) || (!drops_row && g.cols() == 0)) {
    throw DimensionMismatch("cannot remove a line from an empty seed");
  }
  const int rows = g.rows() - (drops_row ? 1 : 0);
  const int cols = g.cols() - (drops_row ? 0 : 1);
  const int dr = side == Side::Top ? 1 : 0;
  const int dc = side == Side::Left ? 1 : 0;
  SeedGenome out(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) out.set(r, c, g.at(r + dr, c + dc));
  return out;
}

SeedGenome shrink(const SeedGenome& g, int min_rows, int min_cols, Rng& rng) {
  std::vector<Side> legal;
  if (g.rows() > min_rows) {
    legal.push_back(Side::Top);
    legal.push_back(Side::Bottom);
  }
  if (g.cols() > min_cols) {
    legal.push_back(Side::Left);
    legal.push_back(Side::Right);
  }
  if (legal.empty()) return g;
  return shrink_side(g, legal[rng.below(legal.size())]);
}

double similarity(const SeedGenome& a, const SeedGenome& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.area() == 0) return 0.0;
  const auto x = a.bits();
  const auto y = b.bits();
  std::size_t same = 0;
  for (std::size_t i = 0; i < x.size(); ++i) same += x[i] == y[i] ? 1 : 0;
  return static_cast<double>(same) / static_cast<double>(x.size());
}

SeedGenome crossover_at(const SeedGenome& a, const SeedGenome& b, Axis axis, int cut) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch("crossover parents must have identical dimensions");
  }
  SeedGenome child(a.rows(), a.cols());
  for (int r = 0; r < a.rows(); ++r) {
    for (int c = 0; c < a.cols(); ++c) {
      const int line = axis == Axis::Row ? r : c;
      child.set(r, c, line < cut ? a.at(r, c) : b.at(r, c));
    }
  }
  return child;
}

SeedGenome crossover(const SeedGenome& a, const SeedGenome& b, Rng& rng) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch("crossover parents must have identical dimensions");
  }
  const Axis axis = rng.below(2) == 0 ? Axis::Row : Axis::Column;
  const int n = axis == Axis::Row ? a.rows() : a.cols();
  // A single line admits no interior cut; the child is then a copy of `a`.
  if (n < 2) return a;
  const int cut = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 1)));
  return crossover_at(a, b, axis, cut);
}

SeedGenome rotate(const SeedGenome& g, int quarter_turns) {
  const int turns = ((quarter_turns % 4) + 4) % 4;
  if (turns == 0) return g;
  const int rows = turns == 2 ? g.rows() : g.cols();
  const int cols = turns == 2 ? g.cols() : g.rows();
  SeedGenome out(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      bool v = false;
      switch (turns) {
        case 1: v = g.at(c, g.cols() - 1 - r); break;
        case 2: v = g.at(g.rows() - 1 - r, g.cols() - 1 - c); break;
        case 3: v = g.at(g.rows() - 1 - c, r); break;
      }
      out.set(r, c, v);
    }
  }
  return out;
}

SeedGenome join_side_by_side(const SeedGenome& left, const SeedGenome& right) {
  const int rows = std::max(left.rows(), right.rows());
  const int cols = left.cols() + 1 + right.cols();
  SeedGenome out(rows, cols);
  auto blit = [&](const SeedGenome& part, int col0) {
    const int top = (rows - part.rows() + 1) / 2;
    for (int r = 0; r < part.rows(); ++r)
      for (int c = 0; c < part.cols(); ++c) out.set(top + r, col0 + c, part.at(r, c));
  };
  blit(left, 0);
  blit(right, left.cols() + 1);
  return out;
}

SeedGenome fuse(const SeedGenome& a, const SeedGenome& b, Rng& rng) {
  const auto ra = rotate(a, static_cast<int>(rng.below(4)));
  const auto rb = rotate(b, static_cast<int>(rng.below(4)));
  return join_side_by_side(ra, rb);
}

SparsestSplit split_at_sparsest(const SeedGenome& g) {
  if (g.area() == 0) throw DimensionMismatch("cannot split an empty seed");
  // Compare densities as cross-multiplied integers so equal densities tie exactly.
  Axis best_axis = Axis::Row;
  int best_index = 0;
  long best_ones = -1;
  long best_len = 1;
  auto consider = [&](Axis axis, int index, long ones, long len) {
    if (best_ones < 0 || ones * best_len < best_ones * len) {
      best_axis = axis;
      best_index = index;
      best_ones = ones;
      best_len = len;
    }
  };
  for (int r = 0; r < g.rows(); ++r) {
    long ones = 0;
    for (int c = 0; c < g.cols(); ++c) ones += g.at(r, c);
    consider(Axis::Row, r, ones, g.cols());
  }
  for (int c = 0; c < g.cols(); ++c) {
    long ones = 0;
    for (int r = 0; r < g.rows(); ++r) ones += g.at(r, c);
    consider(Axis::Column, c, ones, g.rows());
  }

  auto extract = [&](int r0, int r1, int c0, int c1) {
    SeedGenome part(r1 - r0, c1 - c0);
    for (int r = r0; r < r1; ++r)
      for (int c = c0; c < c1; ++c) part.set(r - r0, c - c0, g.at(r, c));
    return part;
  };
  if (best_axis == Axis::Row) {
    return {best_axis, best_index, extract(0, best_index, 0, g.cols()),
            extract(best_index + 1, g.rows(), 0, g.cols())};
  }
  return {best_axis, best_index, extract(0, g.rows(), 0, best_index),
          extract(0, g.rows(), best_index + 1, g.cols())};
}

std::optional<SeedGenome> fission(const SeedGenome& g, int min_rows, int min_cols, Rng& rng) {
  auto split = split_at_sparsest(g);
  SeedGenome kept = rng.below(2) == 0 ? std::move(split.before) : std::move(split.after);
  if (kept.area() == 0 || kept.rows() < min_rows || kept.cols() < min_cols) return std::nullopt;
  return kept;
}

SeedGenome shuffle(const SeedGenome& g, Rng& rng) {
  SeedGenome out = g;
  auto bits = out.bits();
  for (std::size_t i = bits.size(); i > 1; --i) {
    std::swap(bits[i - 1], bits[rng.below(i)]);
  }
  return out;
}

}  // namespace symbiolife
