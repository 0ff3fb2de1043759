#include "saccade/env.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "saccade/rng.hpp"

namespace saccade {

namespace {

void check_dims(int width, int height) {
  if (width < 2 || height < 2) {
    throw std::invalid_argument("maze dimensions must be at least 2x2, got " +
                                std::to_string(width) + "x" + std::to_string(height));
  }
}

Position random_cell(Rng& rng, int width, int height) {
  int row = rng.next_int(0, height - 1);
  int col = rng.next_int(0, width - 1);
  return {row, col};
}

}  // namespace

const char* action_name(Action a) {
  switch (a) {
    case Action::North: return "N";
    case Action::East: return "E";
    case Action::South: return "S";
    case Action::West: return "W";
  }
  return "?";
}

Maze generate_random(int width, int height, uint64_t seed) {
  check_dims(width, height);
  Rng rng(seed);
  Maze maze;
  maze.width = width;
  maze.height = height;
  maze.goal = random_cell(rng, width, height);
  maze.cells.resize(static_cast<size_t>(width) * height);
  for (int& cell : maze.cells) cell = rng.next_int(0, 8);
  maze.cells[static_cast<size_t>(maze.goal.row) * width + maze.goal.col] = 9;
  return maze;
}

Maze generate_circle(int width, int height, uint64_t seed) {
  check_dims(width, height);
  Rng rng(seed);
  Maze maze;
  maze.width = width;
  maze.height = height;
  maze.goal = random_cell(rng, width, height);
  maze.cells.resize(static_cast<size_t>(width) * height);

  double d_max = 0.0;
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      double dr = r - maze.goal.row;
      double dc = c - maze.goal.col;
      d_max = std::max(d_max, std::hypot(dr, dc));
    }
  }
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      double d = std::hypot(double(r - maze.goal.row), double(c - maze.goal.col));
      int digit = 9 - static_cast<int>(std::lround(9.0 * d / d_max));
      digit = std::max(0, digit);
      // Non-goal cells are capped at 8 so the goal keeps the only 9.
      Position p{r, c};
      if (!(p == maze.goal)) digit = std::min(8, digit);
      maze.cells[static_cast<size_t>(r) * width + c] = digit;
    }
  }
  maze.cells[static_cast<size_t>(maze.goal.row) * width + maze.goal.col] = 9;
  return maze;
}

Maze generate_path(int width, int height, uint64_t seed) {
  check_dims(width, height);
  Rng rng(seed);
  Maze maze;
  maze.width = width;
  maze.height = height;
  maze.goal = random_cell(rng, width, height);

  // Random border cell as the walk's origin.
  std::vector<Position> border;
  for (int c = 0; c < width; ++c) {
    border.push_back({0, c});
    border.push_back({height - 1, c});
  }
  for (int r = 1; r < height - 1; ++r) {
    border.push_back({r, 0});
    border.push_back({r, width - 1});
  }
  Position start = border[rng.next_below(border.size())];

  // Self-avoiding walk from start to goal, weighted toward moves that
  // reduce the Manhattan distance. Dead ends restart the walk.
  constexpr int kMaxAttempts = 1000;
  std::vector<Position> walk;
  std::vector<char> on_walk;
  bool found = false;
  for (int attempt = 0; attempt < kMaxAttempts && !found; ++attempt) {
    walk.assign(1, start);
    on_walk.assign(static_cast<size_t>(width) * height, 0);
    on_walk[static_cast<size_t>(start.row) * width + start.col] = 1;
    Position cur = start;
    while (!(cur == maze.goal)) {
      Position candidates[4];
      int weights[4];
      int n = 0;
      int total_weight = 0;
      for (Action a : kAllActions) {
        auto [dr, dc] = displacement(a);
        Position next{cur.row + dr, cur.col + dc};
        if (!maze.in_bounds(next)) continue;
        if (on_walk[static_cast<size_t>(next.row) * width + next.col]) continue;
        int w = shortest_path_len(next, maze.goal) < shortest_path_len(cur, maze.goal) ? 3 : 1;
        candidates[n] = next;
        weights[n] = w;
        total_weight += w;
        ++n;
      }
      if (n == 0) break;  // dead end
      int pick = rng.next_int(0, total_weight - 1);
      int idx = 0;
      while (pick >= weights[idx]) pick -= weights[idx++];
      cur = candidates[idx];
      walk.push_back(cur);
      on_walk[static_cast<size_t>(cur.row) * width + cur.col] = 1;
    }
    found = cur == maze.goal;
  }
  if (!found) {
    throw std::runtime_error("path maze generation exhausted " +
                             std::to_string(kMaxAttempts) + " walk restarts");
  }

  maze.cells.resize(static_cast<size_t>(width) * height);
  for (int& cell : maze.cells) cell = rng.next_int(0, 4);
  for (const Position& p : walk) {
    maze.cells[static_cast<size_t>(p.row) * width + p.col] = rng.next_int(7, 8);
  }
  maze.cells[static_cast<size_t>(maze.goal.row) * width + maze.goal.col] = 9;
  return maze;
}

Observation observe(const Maze& maze, Position pos, int k) {
  if (k % 2 == 0 || k > std::min(maze.width, maze.height)) {
    throw std::invalid_argument("observation window must be odd and fit the maze, got k=" +
                                std::to_string(k));
  }
  Observation obs;
  obs.k = k;
  obs.raw.reserve(static_cast<size_t>(k) * k);
  obs.encoded.reserve(static_cast<size_t>(k) * k);
  const int half = k / 2;
  for (int dr = -half; dr <= half; ++dr) {
    for (int dc = -half; dc <= half; ++dc) {
      Position p{pos.row + dr, pos.col + dc};
      int value = maze.in_bounds(p) ? maze.at(p) : -1;
      obs.raw.push_back(value);
      obs.encoded.push_back(value >= 0 ? value / 9.0 : -1.0);
    }
  }
  return obs;
}

StepOutcome step(const Maze& maze, Position pos, Action action, const RewardConfig& reward) {
  auto [dr, dc] = displacement(action);
  Position next{std::clamp(pos.row + dr, 0, maze.height - 1),
                std::clamp(pos.col + dc, 0, maze.width - 1)};
  StepOutcome out;
  out.next_pos = next;
  out.reached_goal = next == maze.goal;
  out.reward = out.reached_goal ? reward.terminal_reward : reward.step_reward;
  return out;
}

int shortest_path_len(Position a, Position b) {
  return std::abs(a.row - b.row) + std::abs(a.col - b.col);
}

void write_maze(const Maze& maze, std::ostream& out) {
  out << maze.width << ' ' << maze.height << ' ' << maze.goal.row << ' ' << maze.goal.col << '\n';
  for (int r = 0; r < maze.height; ++r) {
    for (int c = 0; c < maze.width; ++c) {
      if (c > 0) out << ' ';
      out << maze.at(r, c);
    }
    out << '\n';
  }
}

Maze read_maze(std::istream& in) {
  auto fail = [](int line, const std::string& what) {
    throw std::runtime_error("maze parse error at line " + std::to_string(line) + ": " + what);
  };
  std::string line;
  if (!std::getline(in, line)) fail(1, "missing header");
  std::istringstream header(line);
  Maze maze;
  if (!(header >> maze.width >> maze.height >> maze.goal.row >> maze.goal.col)) {
    fail(1, "expected 'width height goal_row goal_col'");
  }
  if (maze.width < 1 || maze.height < 1) fail(1, "non-positive dimensions");
  if (maze.goal.row < 0 || maze.goal.row >= maze.height || maze.goal.col < 0 ||
      maze.goal.col >= maze.width) {
    fail(1, "goal out of bounds");
  }
  maze.cells.reserve(static_cast<size_t>(maze.width) * maze.height);
  for (int r = 0; r < maze.height; ++r) {
    if (!std::getline(in, line)) fail(r + 2, "missing row");
    std::istringstream row(line);
    for (int c = 0; c < maze.width; ++c) {
      int digit;
      if (!(row >> digit)) fail(r + 2, "expected " + std::to_string(maze.width) + " digits");
      if (digit < 0 || digit > 9) fail(r + 2, "digit out of range: " + std::to_string(digit));
      maze.cells.push_back(digit);
    }
  }
  if (maze.at(maze.goal) != 9) fail(1, "goal cell does not hold 9");
  return maze;
}

void save_maze(const Maze& maze, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_maze(maze, out);
  if (!out) throw std::runtime_error("write failed: " + path);
}

Maze load_maze(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  return read_maze(in);
}

}  // namespace saccade
