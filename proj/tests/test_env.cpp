#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "saccade/env.hpp"
#include "saccade/oracle.hpp"
#include "saccade/rng.hpp"

using namespace saccade;

namespace {

int count_digit(const Maze& maze, int digit) {
  return static_cast<int>(std::count(maze.cells.begin(), maze.cells.end(), digit));
}

void check_maze_invariants(const Maze& maze) {
  REQUIRE(maze.width >= 1);
  REQUIRE(maze.height >= 1);
  REQUIRE(maze.cells.size() == static_cast<size_t>(maze.width) * maze.height);
  for (int v : maze.cells) {
    CHECK(v >= 0);
    CHECK(v <= 9);
  }
  CHECK(count_digit(maze, 9) == 1);
  CHECK(maze.at(maze.goal) == 9);
}

}  // namespace

TEST_SUITE_BEGIN("env");

TEST_CASE("generate_random produces exactly one 9 at the goal") {
  for (uint64_t seed : {0ULL, 1ULL, 7ULL, 123456ULL}) {
    const Maze maze = generate_random(10, 10, seed);
    check_maze_invariants(maze);
    for (int r = 0; r < maze.height; ++r) {
      for (int c = 0; c < maze.width; ++c) {
        if (!(Position{r, c} == maze.goal)) CHECK(maze.at(r, c) <= 8);
      }
    }
  }
}

TEST_CASE("generate_random 20x20 works with a 5x5 window") {
  const Maze maze = generate_random(20, 20, 42);
  check_maze_invariants(maze);
  const Observation obs = observe(maze, {10, 10}, 5);
  CHECK(obs.raw.size() == 25);
}

TEST_CASE("generators are deterministic in the seed") {
  for (auto* gen : {&generate_random, &generate_circle, &generate_path}) {
    const Maze a = gen(12, 9, 99);
    const Maze b = gen(12, 9, 99);
    CHECK(a.cells == b.cells);
    CHECK(a.goal == b.goal);
    const Maze c = gen(12, 9, 100);
    CHECK(a.cells != c.cells);  // different seed should differ in practice
  }
}

TEST_CASE("generators reject dimensions below 2") {
  CHECK_THROWS_AS(generate_random(1, 10, 0), std::invalid_argument);
  CHECK_THROWS_AS(generate_circle(10, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(generate_path(0, 5, 0), std::invalid_argument);
}

TEST_CASE("circle maze digits decrease with distance to the goal") {
  const Maze maze = generate_circle(20, 20, 5);
  check_maze_invariants(maze);

  // goal cell is 9, the most distant cell is 0
  CHECK(maze.at(maze.goal) == 9);
  double d_max = 0.0;
  Position farthest = maze.goal;
  for (int r = 0; r < maze.height; ++r) {
    for (int c = 0; c < maze.width; ++c) {
      const double d = std::hypot(r - maze.goal.row, c - maze.goal.col);
      if (d > d_max) {
        d_max = d;
        farthest = {r, c};
      }
    }
  }
  CHECK(maze.at(farthest) == 0);

  // brute-force scan over all cell pairs: d(c1) <= d(c2) implies digit >=
  const int n = maze.width * maze.height;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Position p1{i / maze.width, i % maze.width};
      const Position p2{j / maze.width, j % maze.width};
      const double d1 = std::hypot(p1.row - maze.goal.row, p1.col - maze.goal.col);
      const double d2 = std::hypot(p2.row - maze.goal.row, p2.col - maze.goal.col);
      if (d1 <= d2) CHECK(maze.at(p1) >= maze.at(p2));
    }
  }
}

TEST_CASE("path maze: digit bands and connected walk") {
  for (uint64_t seed : {1ULL, 2ULL, 3ULL, 40ULL, 500ULL}) {
    const Maze maze = generate_path(20, 20, seed);
    check_maze_invariants(maze);
    for (int v : maze.cells) {
      const bool on_path = v >= 7;
      const bool off_path = v >= 0 && v <= 4;
      CHECK((on_path || off_path));
    }

    // flood fill from the goal over cells with digit >= 7
    std::vector<char> seen(maze.cells.size(), 0);
    std::vector<Position> stack{maze.goal};
    seen[static_cast<size_t>(maze.goal.row) * maze.width + maze.goal.col] = 1;
    int component = 0;
    while (!stack.empty()) {
      const Position cur = stack.back();
      stack.pop_back();
      ++component;
      for (Action a : kAllActions) {
        auto [dr, dc] = displacement(a);
        const Position next{cur.row + dr, cur.col + dc};
        if (!maze.in_bounds(next)) continue;
        auto& mark = seen[static_cast<size_t>(next.row) * maze.width + next.col];
        if (mark || maze.at(next) < 7) continue;
        mark = 1;
        stack.push_back(next);
      }
    }
    int high_cells = 0;
    for (int v : maze.cells) high_cells += v >= 7 ? 1 : 0;
    CHECK(component == high_cells);
  }
}

TEST_CASE("observe: interior, corner and goal windows") {
  const Maze maze = generate_random(9, 9, 3);

  SUBCASE("fully interior window has no sentinels") {
    const Observation obs = observe(maze, {4, 4}, 3);
    for (int v : obs.raw) {
      CHECK(v >= 0);
      CHECK(v <= 9);
    }
  }
  SUBCASE("corner window pads 5 of 9 cells") {
    const Observation obs = observe(maze, {0, 0}, 3);
    CHECK(std::count(obs.raw.begin(), obs.raw.end(), -1) == 5);
  }
  SUBCASE("window at the goal sees 9 in the center") {
    const Observation obs = observe(maze, maze.goal, 3);
    CHECK(obs.raw[4] == 9);
    CHECK(obs.encoded[4] == 1.0);
  }
  SUBCASE("encoding maps digits to [0,1] and sentinels to -1") {
    const Observation obs = observe(maze, {0, 0}, 3);
    for (size_t i = 0; i < obs.raw.size(); ++i) {
      if (obs.raw[i] >= 0) {
        CHECK(obs.encoded[i] == obs.raw[i] / 9.0);
      } else {
        CHECK(obs.encoded[i] == -1.0);
      }
    }
  }
  SUBCASE("center of the window is the digit under the agent") {
    const Observation obs = observe(maze, {2, 6}, 5);
    CHECK(obs.raw[12] == maze.at(2, 6));
  }
}

TEST_CASE("observe rejects invalid windows") {
  const Maze maze = generate_random(5, 5, 1);
  CHECK_THROWS_AS(observe(maze, {2, 2}, 4), std::invalid_argument);
  CHECK_THROWS_AS(observe(maze, {2, 2}, 7), std::invalid_argument);
}

TEST_CASE("observe is side-effect free") {
  const Maze maze = generate_random(7, 7, 11);
  const Observation a = observe(maze, {1, 5}, 3);
  const Observation b = observe(maze, {1, 5}, 3);
  CHECK(a.raw == b.raw);
  CHECK(a.encoded == b.encoded);
}

TEST_CASE("step: terminal transition, boundary clamp, default rewards") {
  Maze maze;
  maze.width = 6;
  maze.height = 6;
  maze.cells.assign(36, 0);
  maze.goal = {2, 3};
  maze.cells[2 * 6 + 3] = 9;

  SUBCASE("moving onto the goal is terminal with the terminal reward") {
    const StepOutcome out = step(maze, {2, 2}, Action::East);
    CHECK(out.reached_goal);
    CHECK(out.reward == 1.0);
    CHECK(out.next_pos == maze.goal);
  }
  SUBCASE("off-grid move clamps in place") {
    const StepOutcome out = step(maze, {0, 0}, Action::North);
    CHECK(out.next_pos == Position{0, 0});
    CHECK_FALSE(out.reached_goal);
  }
  SUBCASE("non-terminal step yields the step reward") {
    const StepOutcome out = step(maze, {5, 0}, Action::South);
    CHECK_FALSE(out.reached_goal);
    CHECK(out.reward == 0.0);
  }
  SUBCASE("custom reward config") {
    const RewardConfig reward{5.0, -0.1};
    CHECK(step(maze, {0, 0}, Action::North, reward).reward == -0.1);
    CHECK(step(maze, {2, 2}, Action::East, reward).reward == 5.0);
  }
}

TEST_CASE("step never leaves the maze; reached_goal iff at goal") {
  const Maze maze = generate_random(5, 7, 17);
  Rng rng(55);
  Position pos{0, 0};
  for (int i = 0; i < 500; ++i) {
    const Action a = kAllActions[rng.next_below(4)];
    const StepOutcome out = step(maze, pos, a);
    CHECK(maze.in_bounds(out.next_pos));
    CHECK(out.reached_goal == (out.next_pos == maze.goal));
    pos = out.next_pos;
  }
}

TEST_CASE("shortest_path_len is the Manhattan distance") {
  CHECK(shortest_path_len({3, 4}, {3, 4}) == 0);
  CHECK(shortest_path_len({0, 0}, {3, 4}) == 7);
  CHECK(shortest_path_len({5, 1}, {2, 6}) == 8);

  // BFS oracle agreement on 100 random pairs
  const Maze maze = generate_random(10, 10, 21);
  Rng rng(77);
  for (int i = 0; i < 100; ++i) {
    const Position a{rng.next_int(0, 9), rng.next_int(0, 9)};
    const Position b{rng.next_int(0, 9), rng.next_int(0, 9)};
    CHECK(shortest_path_len(a, b) == oracle::bfs_shortest(maze, a, b));
  }
}

TEST_CASE("maze invariants hold across many seeds for all generators") {
  for (uint64_t seed = 0; seed < 25; ++seed) {
    check_maze_invariants(generate_random(8, 6, seed));
    check_maze_invariants(generate_circle(8, 6, seed));
    check_maze_invariants(generate_path(8, 6, seed));
    check_maze_invariants(generate_random(2, 2, seed));
    check_maze_invariants(generate_circle(2, 2, seed));
    check_maze_invariants(generate_path(2, 2, seed));
  }
}

TEST_CASE("maze file round-trips byte-exactly") {
  const Maze maze = generate_circle(13, 7, 123);
  std::ostringstream first;
  write_maze(maze, first);
  std::istringstream parse(first.str());
  const Maze loaded = read_maze(parse);
  CHECK(loaded.cells == maze.cells);
  CHECK(loaded.goal == maze.goal);
  std::ostringstream second;
  write_maze(loaded, second);
  CHECK(first.str() == second.str());
}

TEST_CASE("maze parser reports the offending line") {
  std::istringstream bad_header("not a header\n");
  CHECK_THROWS_WITH_AS(read_maze(bad_header),
                       doctest::Contains("line 1"), std::runtime_error);

  std::istringstream bad_row("3 2 0 0\n9 1 2\n4 x 5\n");
  CHECK_THROWS_WITH_AS(read_maze(bad_row), doctest::Contains("line 3"), std::runtime_error);

  std::istringstream missing_row("3 2 0 0\n9 1 2\n");
  CHECK_THROWS_AS(read_maze(missing_row), std::runtime_error);
}

TEST_SUITE_END();
