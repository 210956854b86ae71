#include <vector>

#include "doctest.h"
#include "reference_life.hpp"
#include "symbiolife/errors.hpp"
#include "symbiolife/life_engine.hpp"

using namespace symbiolife;

namespace {

Arena vertical_blinker() {
  Arena a(5, 5);
  a.set(2, 1, CellState::Red);
  a.set(2, 2, CellState::Red);
  a.set(2, 3, CellState::Red);
  return a;
}

}  // namespace

TEST_CASE("blinker oscillates with period two") {
  const Arena start = vertical_blinker();
  const Arena one = step(start);
  CHECK(one.at(1, 2) == CellState::Red);
  CHECK(one.at(2, 2) == CellState::Red);
  CHECK(one.at(3, 2) == CellState::Red);
  CHECK(one.live_count() == 3);
  CHECK(step(one) == start);
}

TEST_CASE("isolated cells die of underpopulation") {
  Arena a(6, 6);
  a.set(0, 0, CellState::Red);
  a.set(3, 3, CellState::Blue);
  CHECK(step(a).live_count() == 0);
}

TEST_CASE("births take the majority color of the three parents") {
  // Parents on one row above the target; the target (1,1) has exactly three live neighbours.
  Arena a(7, 7);
  a.set(0, 0, CellState::Red);
  a.set(1, 0, CellState::Red);
  a.set(2, 0, CellState::Blue);
  CHECK(step(a).at(1, 1) == CellState::Red);

  Arena b(7, 7);
  b.set(0, 0, CellState::Blue);
  b.set(1, 0, CellState::Blue);
  b.set(2, 0, CellState::Red);
  CHECK(step(b).at(1, 1) == CellState::Blue);
}

TEST_CASE("bitplane step matches the dense reference on awkward sizes") {
  Rng rng(11);
  const int widths[] = {1, 2, 3, 7, 63, 64, 65, 127, 128, 130};
  const int heights[] = {1, 2, 3, 9};
  for (int w : widths) {
    for (int h : heights) {
      Arena a = reference::random_soup(w, h, 0.4, rng);
      auto grid = reference::from_arena(a);
      for (int t = 0; t < 12; ++t) {
        a.step();
        grid = reference::immigration_step(grid);
        REQUIRE_MESSAGE(a == reference::to_arena(grid), "width " << w << " height " << h << " step " << t);
      }
    }
  }
}

TEST_CASE("projection commutes with stepping") {
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const Arena a = reference::random_soup(8, 8, 0.45, rng);
    CHECK(reference::live_mask(project_to_life(step(a))) ==
          reference::life_step(reference::live_mask(project_to_life(a)), 8, 8));
  }
}

TEST_CASE("projection of simple arenas") {
  CHECK(project_to_life(Arena(4, 4)).live_count() == 0);
  Arena a(4, 4);
  a.set(0, 0, CellState::Red);
  a.set(1, 0, CellState::Red);
  a.set(3, 3, CellState::Blue);
  const Arena p = project_to_life(a);
  CHECK(p.live_count() == 3);
  CHECK(p.count(CellState::Blue) == 0);
}

TEST_CASE("surviving cells keep their color") {
  Rng rng(17);
  for (int i = 0; i < 100; ++i) {
    Arena a = reference::random_soup(16, 12, 0.4, rng);
    for (int t = 0; t < 10; ++t) {
      const Arena next = step(a);
      for (int y = 0; y < a.height(); ++y)
        for (int x = 0; x < a.width(); ++x)
          if (a.at(x, y) != CellState::Dead && next.at(x, y) != CellState::Dead)
            REQUIRE(a.at(x, y) == next.at(x, y));
      a = next;
    }
  }
}

TEST_CASE("stepping commutes with toroidal translation") {
  Rng rng(23);
  for (int i = 0; i < 50; ++i) {
    const Arena a = reference::random_soup(70, 9, 0.35, rng);
    const int dx = static_cast<int>(rng.below(70));
    const int dy = static_cast<int>(rng.below(9));
    CHECK(step(reference::translate(a, dx, dy)) == reference::translate(step(a), dx, dy));
  }
}

TEST_CASE("step is deterministic") {
  Rng rng(3);
  const Arena a = reference::random_soup(40, 20, 0.3, rng);
  CHECK(step(a) == step(a));
}

TEST_CASE("size_game scales the toroid with the larger seed") {
  const SeedGenome five(5, 5);
  const SeedGenome wide(5, 24);
  CHECK(size_game(five, five, {6.0, 3.0, 6.0}) == GameSpec{30, 15, 270});
  CHECK(size_game(wide, five, {6.0, 3.0, 6.0}) == GameSpec{144, 72, 1296});
  CHECK(size_game(five, five, {1.0, 1.0, 1.0}) == GameSpec{5, 5, 10});
}

TEST_CASE("size_game rounds half up") {
  const SeedGenome five(5, 5);
  // 5 * 1.5 = 7.5 -> 8; 5 * 1.3 = 6.5 -> 7; (8 + 7) * 0.5 = 7.5 -> 8
  CHECK(size_game(five, five, {1.5, 1.3, 0.5}) == GameSpec{8, 7, 8});
}

TEST_CASE("place_seeds") {
  const GameSpec spec{30, 15, 270};

  SUBCASE("empty seeds give an empty arena") {
    CHECK(place_seeds(spec, SeedGenome(5, 5), SeedGenome(5, 5), 0).live_count() == 0);
  }

  SUBCASE("24x5 blocks land in opposite halves without overlap") {
    Rng rng(1);
    const SeedGenome red = random_seed(5, 24, 0.2, rng);
    const SeedGenome blue = random_seed(5, 24, 0.225, rng);
    const GameSpec big = size_game(red, blue, {6.0, 3.0, 6.0});
    for (int trial : {0, 1}) {
      const Arena a = place_seeds(big, red, blue, trial);
      CHECK(a.count(CellState::Red) == static_cast<std::size_t>(red.live_count()));
      CHECK(a.count(CellState::Blue) == static_cast<std::size_t>(blue.live_count()));
      const int half = big.width / 2;
      for (int y = 0; y < big.height; ++y) {
        for (int x = 0; x < big.width; ++x) {
          const bool left = x < half;
          const CellState expect_absent = (left == (trial == 0)) ? CellState::Blue : CellState::Red;
          CHECK(a.at(x, y) != expect_absent);
        }
      }
    }
  }

  SUBCASE("placement centers the seed in its half") {
    const SeedGenome dot = SeedGenome::from_rows({"1"});
    const Arena a = place_seeds(spec, dot, dot, 0);
    CHECK(a.at(7, 7) == CellState::Red);
    CHECK(a.at(22, 7) == CellState::Blue);
    const Arena b = place_seeds(spec, dot, dot, 1);
    CHECK(b.at(7, 7) == CellState::Blue);
    CHECK(b.at(22, 7) == CellState::Red);
  }

  SUBCASE("oversized seeds are rejected") {
    CHECK_THROWS_AS(place_seeds(GameSpec{5, 5, 10}, SeedGenome(5, 5), SeedGenome(5, 5), 0), SeedTooLarge);
  }
}

TEST_CASE("run_game scoring") {
  const GameFactors factors;

  SUBCASE("two empty seeds tie") {
    const auto o = run_game(SeedGenome(5, 5), SeedGenome(5, 5), factors, 0);
    CHECK(o.result == GameResult::Tie);
    CHECK(o.red_score == 0);
    CHECK(o.blue_score == 0);
  }

  SUBCASE("a still life has zero growth") {
    const auto block = SeedGenome::from_rows({"11", "11"});
    const auto o = run_game(block, SeedGenome(2, 2), factors, 0);
    CHECK(o.red_initial == 4);
    CHECK(o.red_final == 4);
    CHECK(o.red_score == 0);
    CHECK(o.result == GameResult::Tie);
  }

  SUBCASE("a growing pattern beats an empty seed from either side") {
    const auto r_pentomino = SeedGenome::from_rows({"011", "110", "010"});
    for (int trial : {0, 1}) {
      const auto o = run_game(r_pentomino, SeedGenome(3, 3), factors, trial);
      CHECK(o.red_score >= 0);
      CHECK(o.blue_score == 0);
    }
  }

  SUBCASE("scores are clamped at zero") {
    Rng rng(9);
    for (int i = 0; i < 30; ++i) {
      const auto o = run_game(random_seed(5, 5, 0.375, rng), random_seed(5, 5, 0.375, rng), factors, i);
      CHECK(o.red_score == std::max(0, o.red_final - o.red_initial));
      CHECK(o.blue_score == std::max(0, o.blue_final - o.blue_initial));
      CHECK(o.red_score >= 0);
      CHECK(o.blue_score >= 0);
    }
  }
}

TEST_CASE("self-play on an even toroid is an exact tie") {
  Rng rng(31);
  for (int i = 0; i < 20; ++i) {
    const auto s = random_seed(5, 5, 0.375, rng);
    const auto o = run_game(s, s, GameFactors{}, i);
    CHECK(o.result == GameResult::Tie);
    CHECK(o.red_final == o.blue_final);
  }
}

TEST_CASE("run_game agrees with a full-length dense simulation") {
  symbiolife::Rng rng(404);
  for (int i = 0; i < 150; ++i) {
    const int ra = 2 + static_cast<int>(rng.below(6)), ca = 2 + static_cast<int>(rng.below(6));
    const int rb = 2 + static_cast<int>(rng.below(6)), cb = 2 + static_cast<int>(rng.below(6));
    const SeedGenome a = random_seed(ra, ca, 0.45, rng);
    const SeedGenome b = random_seed(rb, cb, 0.45, rng);
    const int trial = i % 2;
    const GameSpec spec = size_game(a, b, GameFactors{});
    const Arena initial = place_seeds(spec, a, b, trial);
    reference::Grid g = reference::from_arena(initial);
    for (int t = 0; t < spec.max_steps; ++t) g = reference::immigration_step(g);
    const GameOutcome expected = score_game(initial, reference::to_arena(g));
    const GameOutcome got = run_game(a, b, GameFactors{}, trial);
    CHECK(got.red_final == expected.red_final);
    CHECK(got.blue_final == expected.blue_final);
    CHECK(got.result == expected.result);
  }
}
