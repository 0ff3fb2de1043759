#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace saccade {

struct Position {
  int row = 0;
  int col = 0;
  bool operator==(const Position&) const = default;
};

// Four saccade directions. Index order is the argmax tie-break order.
enum class Action : int { North = 0, East = 1, South = 2, West = 3 };

inline constexpr int kNumActions = 4;
inline constexpr std::array<Action, kNumActions> kAllActions = {
    Action::North, Action::East, Action::South, Action::West};

// Unit displacement of an action as (drow, dcol).
constexpr std::array<int, 2> displacement(Action a) {
  switch (a) {
    case Action::North: return {-1, 0};
    case Action::East: return {0, 1};
    case Action::South: return {1, 0};
    case Action::West: return {0, -1};
  }
  return {0, 0};
}

const char* action_name(Action a);

// Rectangular grid of digits 0-9 with a single goal cell holding the 9.
struct Maze {
  int width = 0;
  int height = 0;
  std::vector<int> cells;  // row-major, height * width entries
  Position goal;

  int at(int row, int col) const { return cells[static_cast<size_t>(row) * width + col]; }
  int at(Position p) const { return at(p.row, p.col); }
  bool in_bounds(Position p) const {
    return p.row >= 0 && p.row < height && p.col >= 0 && p.col < width;
  }
};

struct RewardConfig {
  double terminal_reward = 1.0;
  double step_reward = 0.0;
};

// k x k window centered on the agent. Cells outside the maze hold the
// sentinel -1; encoded values are digit/9 for real cells and -1.0 outside.
struct Observation {
  int k = 0;
  std::vector<int> raw;
  std::vector<double> encoded;
};

struct StepOutcome {
  Position next_pos;
  double reward = 0.0;
  bool reached_goal = false;
};

// Maze generators. All are pure functions of (width, height, seed).
Maze generate_random(int width, int height, uint64_t seed);
Maze generate_circle(int width, int height, uint64_t seed);
Maze generate_path(int width, int height, uint64_t seed);

Observation observe(const Maze& maze, Position pos, int k);

// Applies the action with boundary clamping; an off-grid move leaves the
// agent in place but still counts as a step.
StepOutcome step(const Maze& maze, Position pos, Action action,
                 const RewardConfig& reward = {});

// Manhattan distance; exact on an obstacle-free 4-connected grid.
int shortest_path_len(Position a, Position b);

// Plain-text maze format: "width height goal_row goal_col" then one line of
// space-separated digits per row. Round-trips byte-exactly.
void write_maze(const Maze& maze, std::ostream& out);
Maze read_maze(std::istream& in);
void save_maze(const Maze& maze, const std::string& path);
Maze load_maze(const std::string& path);

}  // namespace saccade
