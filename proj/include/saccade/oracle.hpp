#pragma once

#include <array>
#include <vector>

#include "saccade/env.hpp"
#include "saccade/qnet.hpp"
#include "saccade/rng.hpp"

namespace saccade::oracle {

// 4-connected BFS distance; independent reference for shortest_path_len.
int bfs_shortest(const Maze& maze, Position a, Position b);

// Exact tabular Q estimates over the fully observable state (the true
// agent position).
struct TabularQ {
  int width = 0;
  int height = 0;
  std::vector<std::array<double, kNumActions>> table;  // row-major by position

  double q(Position pos, Action a) const {
    return table[static_cast<size_t>(pos.row) * width + pos.col][static_cast<int>(a)];
  }
  double max_q(Position pos) const;
  Action greedy_action(Position pos) const;  // ties break toward lower index
};

// Epsilon-greedy tabular Q-learning with the one-step bootstrapped target
// and the terminal rule (terminal target is the raw reward).
TabularQ tabular_q_learn(const Maze& maze, const Hyperparams& hyper, int episodes, Rng& rng,
                         const RewardConfig& reward = {});

}  // namespace saccade::oracle
